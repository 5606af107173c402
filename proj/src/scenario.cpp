#include "fracchemo/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <fmt/format.h>

#include "fracchemo/operators.hpp"
#include "fracchemo/snapshot.hpp"

namespace fracchemo {

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, key, message)
                                  : (key.empty() ? message : fmt::format("{}: {}", key, message))),
      key_(std::move(key)),
      line_(line) {}

// --- recipes ---------------------------------------------------------------

namespace {

class RecipeParser {
 public:
  RecipeParser(std::string_view text, int dim) : dim_(dim) {
    for (char c : text) {
      if (c != ' ' && c != '\t') s_.push_back(c);
    }
  }

  std::vector<ModeTerm> parse() {
    std::vector<ModeTerm> terms;
    if (s_.empty()) return terms;
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      first = false;
      terms.push_back(term(sign));
    }
    return terms;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(fmt::format("{} at position {} in '{}'", what, pos_, s_));
  }

  bool starts_func() const { return s_.compare(pos_, 4, "cos(") == 0 || s_.compare(pos_, 4, "sin(") == 0; }

  double number() {
    double v = 0.0;
    const auto* begin = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    if (!std::isfinite(v)) fail("non-finite number");
    return v;
  }

  int integer() {
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = peek() == '-';
      ++pos_;
    }
    int v = 0;
    const auto* begin = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer wavenumber");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return neg ? -v : v;
  }

  void expect(char c) {
    if (peek() != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  ModeTerm term(double sign) {
    ModeTerm t;
    t.amplitude = sign;
    if (!starts_func()) {
      t.amplitude = sign * number();
      if (peek() != '*') return t;  // constant
      ++pos_;
      if (!starts_func()) fail("expected cos( or sin( after '*'");
    }
    t.kind = s_[pos_] == 'c' ? ModeTerm::Kind::cosine : ModeTerm::Kind::sine;
    pos_ += 4;
    t.k.k1 = integer();
    if (peek() == ',') {
      ++pos_;
      t.k.k2 = integer();
      if (dim_ == 1) fail("two wavenumbers given for a 1-D field");
    } else if (dim_ == 2) {
      fail("2-D fields need two wavenumbers k1,k2");
    }
    if (peek() == ';') {
      ++pos_;
      t.phase = sign_prefixed_number();
    }
    expect(')');
    return t;
  }

  double sign_prefixed_number() {
    double s = 1.0;
    if (peek() == '-' || peek() == '+') {
      s = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    return s * number();
  }

  std::string s_;
  std::size_t pos_ = 0;
  int dim_;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<ModeTerm> parse_recipe(std::string_view text, int dim) { return RecipeParser(text, dim).parse(); }

std::string format_recipe(const std::vector<ModeTerm>& terms) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    if (t.kind == ModeTerm::Kind::constant) {
      out += num(t.amplitude);
      continue;
    }
    out += num(t.amplitude);
    out += t.kind == ModeTerm::Kind::cosine ? "*cos(" : "*sin(";
    out += std::to_string(t.k.k1);
    if (t.k.k2 != 0) out += "," + std::to_string(t.k.k2);
    if (t.phase != 0.0) out += ";" + num(t.phase);
    out += ")";
  }
  return out;
}

SpectralField realize(const std::vector<ModeTerm>& terms, const Grid& grid) {
  SpectralField f(grid);
  for (const auto& t : terms) {
    switch (t.kind) {
      case ModeTerm::Kind::constant: f.add_cosine({0, 0}, t.amplitude); break;
      case ModeTerm::Kind::cosine: f.add_cosine(t.k, t.amplitude, t.phase); break;
      case ModeTerm::Kind::sine: f.add_sine(t.k, t.amplitude, t.phase); break;
    }
  }
  return f;
}

// --- config text -------------------------------------------------------------

namespace {

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario", {"name", "seed"}},
      {"model", {"d", "alpha", "kinetics", "dealias"}},
      {"grid", {"n"}},
      {"integrator", {"t_end", "dt_max", "cfl", "sample_every", "mode", "blowup_cap", "fixed_dt"}},
      {"initial", {"u0", "q0", "q0_1", "q0_2", "q0_potential", "snapshot", "preset", "preset_amplitude", "preset_band"}},
      {"hypotheses", {"u0_nonnegative", "irrotational", "monitors", "monitor_tolerance"}},
      {"output", {"csv", "snapshot_every", "snapshot_prefix"}},
      {"verify", {"tol_energy", "tol_h1", "tol_h2", "tol_h1_2d"}},
      {"sweep", {"alphas", "amplitudes", "csv"}},
      {"scaling", {"lambda"}},
      {"sobolev", {"budget"}},
  };
  return keys;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key"

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    const bool comment = line[i] == '#' || (line[i] == ';' && trim(line.substr(0, i)).empty());
    if (!quoted && comment) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

Table tokenize(std::string_view text, const ParseOptions& options) {
  Table table;
  std::string section;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++lineno;
    const std::string line = trim(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", lineno, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!section_keys().contains(section)) {
        if (options.strict) throw ConfigError("[" + section + "]", lineno, "unknown section");
        if (options.warnings) options.warnings->push_back(fmt::format("line {}: ignoring unknown section [{}]", lineno, section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", lineno, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("", lineno, "empty key");

    std::string owner = section;
    if (owner.empty()) {
      std::vector<std::string> owners;
      for (const auto& [sec, keys] : section_keys()) {
        if (keys.contains(key)) owners.push_back(sec);
      }
      if (owners.size() > 1) {
        throw ConfigError(key, lineno, "ambiguous outside a section; put it under [" + owners.front() + "] or [" +
                                           owners.back() + "]");
      }
      if (owners.size() == 1) owner = owners.front();
    }
    const auto sec = section_keys().find(owner);
    if (sec == section_keys().end() || !sec->second.contains(key)) {
      if (!section_keys().contains(owner) && !owner.empty()) continue;  // inside an ignored section
      if (options.strict) throw ConfigError(key, lineno, "unknown key");
      if (options.warnings) options.warnings->push_back(fmt::format("line {}: ignoring unknown key '{}'", lineno, key));
      continue;
    }
    const std::string full = owner + "." + key;
    if (table.contains(full)) {
      throw ConfigError(key, lineno, fmt::format("duplicate key (first set on line {})", table[full].line));
    }
    table[full] = {value, lineno};
  }
  return table;
}

class Reader {
 public:
  explicit Reader(Table t) : t_(std::move(t)) {}

  const Entry* find(const std::string& full) const {
    const auto it = t_.find(full);
    return it == t_.end() ? nullptr : &it->second;
  }
  bool has(const std::string& full) const { return find(full) != nullptr; }
  int line(const std::string& full) const { return has(full) ? find(full)->line : 0; }

  static std::string key_of(const std::string& full) { return full.substr(full.find('.') + 1); }

  [[noreturn]] void fail(const std::string& full, const std::string& msg) const {
    throw ConfigError(key_of(full), line(full), msg);
  }

  double real(const std::string& full, double fallback) const {
    const Entry* e = find(full);
    if (!e) return fallback;
    return parse_real(full, e->value);
  }

  double parse_real(const std::string& full, const std::string& text) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(full, "expected a finite number, got '" + text + "'");
    }
    return v;
  }

  long long integer(const std::string& full, long long fallback) const {
    const Entry* e = find(full);
    if (!e) return fallback;
    long long v = 0;
    const auto& s = e->value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(full, "expected an integer, got '" + s + "'");
    return v;
  }

  bool boolean(const std::string& full, bool fallback) const {
    const Entry* e = find(full);
    if (!e) return fallback;
    const auto& s = e->value;
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    fail(full, "expected true or false, got '" + s + "'");
  }

  std::string text(const std::string& full, const std::string& fallback) const {
    const Entry* e = find(full);
    return e ? e->value : fallback;
  }

  std::vector<std::string> list(const std::string& full) const {
    std::vector<std::string> out;
    const Entry* e = find(full);
    if (!e) return out;
    std::size_t start = 0;
    const auto& s = e->value;
    while (start <= s.size()) {
      const std::size_t end = std::min(s.find(',', start), s.size());
      const std::string item = trim(std::string_view(s).substr(start, end - start));
      if (!item.empty()) out.push_back(item);
      start = end + 1;
    }
    return out;
  }

  std::vector<double> reals(const std::string& full) const {
    std::vector<double> out;
    for (const auto& item : list(full)) out.push_back(parse_real(full, item));
    return out;
  }

 private:
  Table t_;
};

template <class F>
auto guarded(const Reader& r, const std::string& full, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(full, e.what());
  }
}

bool needs_mean_zero_q(const std::vector<Monitor>& monitors) {
  return std::any_of(monitors.begin(), monitors.end(), [](Monitor m) { return m != Monitor::E0; });
}

}  // namespace

Scenario parse_config(std::string_view text, const ParseOptions& options) {
  const Reader r(tokenize(text, options));
  Scenario sc;

  sc.name = r.text("scenario.name", sc.name);
  {
    const long long seed = r.integer("scenario.seed", 1);
    if (seed < 0) r.fail("scenario.seed", "seed must be non-negative");
    sc.seed = static_cast<std::uint64_t>(seed);
  }

  const long long d = r.integer("model.d", 1);
  if (d != 1 && d != 2) r.fail("model.d", "d must be 1 or 2");
  sc.model.dim = static_cast<int>(d);
  if (!r.has("model.alpha")) throw ConfigError("alpha", 0, "missing required key");
  sc.model.alpha = r.real("model.alpha", 2.0);
  if (!(sc.model.alpha > 0.0 && sc.model.alpha <= 2.0)) r.fail("model.alpha", "alpha must lie in (0, 2]");
  sc.model.kinetics =
      guarded(r, "model.kinetics", [&] { return parse_kinetics(r.text("model.kinetics", "quadratic")); });
  sc.model.dealias = r.boolean("model.dealias", true);

  if (!r.has("grid.n")) throw ConfigError("n", 0, "missing required key");
  const long long n = r.integer("grid.n", 64);
  if (n < 8 || n % 2 != 0 || n > (1 << 16)) r.fail("grid.n", "n must be even and in [8, 65536]");
  sc.n = static_cast<int>(n);

  if (!r.has("integrator.t_end")) throw ConfigError("t_end", 0, "missing required key");
  sc.settings.t_end = r.real("integrator.t_end", 1.0);
  if (!(sc.settings.t_end > 0.0)) r.fail("integrator.t_end", "t_end must be positive");
  sc.settings.dt_max = r.real("integrator.dt_max", sc.settings.dt_max);
  if (!(sc.settings.dt_max > 0.0)) r.fail("integrator.dt_max", "dt_max must be positive");
  sc.settings.cfl = r.real("integrator.cfl", sc.settings.cfl);
  if (!(sc.settings.cfl > 0.0 && sc.settings.cfl <= 1.0)) r.fail("integrator.cfl", "cfl must lie in (0, 1]");
  const long long every = r.integer("integrator.sample_every", 1);
  if (every < 1 || every > 1000000000) r.fail("integrator.sample_every", "sample_every must be >= 1");
  sc.settings.sample_every = static_cast<int>(every);
  sc.settings.mode = guarded(r, "integrator.mode", [&] { return parse_step_mode(r.text("integrator.mode", "full")); });
  sc.settings.blowup_cap = r.real("integrator.blowup_cap", sc.settings.blowup_cap);
  if (!(sc.settings.blowup_cap > 0.0)) r.fail("integrator.blowup_cap", "blowup_cap must be positive");
  sc.fixed_dt = r.real("integrator.fixed_dt", 0.0);
  if (sc.fixed_dt < 0.0) r.fail("integrator.fixed_dt", "fixed_dt must be >= 0 (0 selects the CFL rule)");

  auto& in = sc.initial;
  in.u0 = r.text("initial.u0", "");
  in.snapshot = r.text("initial.snapshot", "");
  in.preset = r.text("initial.preset", "");
  in.q0_potential = r.text("initial.q0_potential", "");
  in.preset_amplitude = r.real("initial.preset_amplitude", in.preset_amplitude);
  const long long band = r.integer("initial.preset_band", in.preset_band);
  if (band < 1 || 3 * band >= sc.n) r.fail("initial.preset_band", "preset_band must satisfy 1 <= band < n/3");
  in.preset_band = static_cast<int>(band);
  if (!in.preset.empty() && in.preset != "random_smooth") {
    r.fail("initial.preset", "unknown preset '" + in.preset + "' (known: random_smooth)");
  }
  if (sc.model.dim == 1) {
    if (r.has("initial.q0_1") || r.has("initial.q0_2")) r.fail("initial.q0_1", "use q0 for 1-D scenarios");
    in.q0 = {r.text("initial.q0", "")};
  } else {
    if (r.has("initial.q0")) r.fail("initial.q0", "use q0_1 and q0_2 (or q0_potential) for 2-D scenarios");
    in.q0 = {r.text("initial.q0_1", ""), r.text("initial.q0_2", "")};
  }
  const bool has_q_lists = std::any_of(in.q0.begin(), in.q0.end(), [](const std::string& s) { return !s.empty(); });
  if (!in.q0_potential.empty() && has_q_lists) {
    r.fail("initial.q0_potential", "give either q0_potential or q0 components, not both");
  }
  if (in.snapshot.empty() && in.preset.empty() && !r.has("initial.u0")) {
    throw ConfigError("u0", 0, "missing required key (or give snapshot or preset)");
  }
  // Syntax check of every recipe now so errors carry their line.
  auto check_recipe = [&](const std::string& full, const std::string& recipe) {
    guarded(r, full, [&] {
      realize(parse_recipe(recipe, sc.model.dim), Grid(sc.model.dim, sc.n));
      return 0;
    });
  };
  check_recipe("initial.u0", in.u0);
  check_recipe("initial.q0_potential", in.q0_potential);
  for (std::size_t i = 0; i < in.q0.size(); ++i) {
    check_recipe(sc.model.dim == 1 ? "initial.q0" : fmt::format("initial.q0_{}", i + 1), in.q0[i]);
  }

  auto& hyp = sc.hypotheses;
  hyp.u0_nonnegative = r.boolean("hypotheses.u0_nonnegative", false);
  hyp.irrotational = r.boolean("hypotheses.irrotational", false);
  for (const auto& m : r.list("hypotheses.monitors")) {
    hyp.monitors.push_back(guarded(r, "hypotheses.monitors", [&] { return parse_monitor(m); }));
  }
  hyp.monitor_tolerance = r.real("hypotheses.monitor_tolerance", hyp.monitor_tolerance);
  if (!(hyp.monitor_tolerance >= 0.0)) r.fail("hypotheses.monitor_tolerance", "tolerance must be >= 0");

  sc.output.csv = r.text("output.csv", sc.output.csv);
  const long long snap_every = r.integer("output.snapshot_every", 0);
  if (snap_every < 0 || snap_every > 1000000000) r.fail("output.snapshot_every", "snapshot_every must be >= 0");
  sc.output.snapshot_every = static_cast<int>(snap_every);
  sc.output.snapshot_prefix = r.text("output.snapshot_prefix", sc.output.snapshot_prefix);
  if (sc.output.snapshot_prefix.empty()) r.fail("output.snapshot_prefix", "prefix must not be empty");

  sc.verify.tol_energy = r.real("verify.tol_energy", sc.verify.tol_energy);
  sc.verify.tol_h1 = r.real("verify.tol_h1", sc.verify.tol_h1);
  sc.verify.tol_h2 = r.real("verify.tol_h2", sc.verify.tol_h2);
  sc.verify.tol_h1_2d = r.real("verify.tol_h1_2d", sc.verify.tol_h1_2d);

  sc.sweep.alphas = r.reals("sweep.alphas");
  for (double a : sc.sweep.alphas) {
    if (!(a > 0.0 && a <= 2.0)) r.fail("sweep.alphas", "every alpha must lie in (0, 2]");
  }
  sc.sweep.amplitudes = r.reals("sweep.amplitudes");
  sc.sweep.csv = r.text("sweep.csv", sc.sweep.csv);

  sc.scaling_lambda = r.real("scaling.lambda", sc.scaling_lambda);
  if (!(sc.scaling_lambda >= 1.0) || sc.scaling_lambda != std::floor(sc.scaling_lambda)) {
    r.fail("scaling.lambda", "lambda must be an integer >= 1");
  }
  const long long budget = r.integer("sobolev.budget", static_cast<long long>(sc.sobolev_budget));
  if (budget < 1) r.fail("sobolev.budget", "budget must be >= 1");
  sc.sobolev_budget = static_cast<std::size_t>(budget);

  if (in.snapshot.empty()) {
    const State s = initial_state(sc);
    try {
      check_hypotheses(sc, s);
    } catch (const ConfigError& e) {
      const std::string full = e.key() == "u0" ? "initial.u0"
                               : e.key() == "irrotational" ? "hypotheses.irrotational"
                               : "hypotheses.monitors";
      throw ConfigError(e.key(), r.line(full), e.what());
    }
  }
  return sc;
}

std::string dump_config(const Scenario& sc) {
  std::string out;
  auto kv = [&out](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s;
  };

  out += "[scenario]\n";
  kv("name", quoted(sc.name));
  kv("seed", std::to_string(sc.seed));
  out += "\n[model]\n";
  kv("d", std::to_string(sc.model.dim));
  kv("alpha", num(sc.model.alpha));
  kv("kinetics", std::string(to_string(sc.model.kinetics)));
  kv("dealias", sc.model.dealias ? "true" : "false");
  out += "\n[grid]\n";
  kv("n", std::to_string(sc.n));
  out += "\n[integrator]\n";
  kv("t_end", num(sc.settings.t_end));
  kv("dt_max", num(sc.settings.dt_max));
  kv("cfl", num(sc.settings.cfl));
  kv("sample_every", std::to_string(sc.settings.sample_every));
  kv("mode", std::string(to_string(sc.settings.mode)));
  kv("blowup_cap", num(sc.settings.blowup_cap));
  kv("fixed_dt", num(sc.fixed_dt));
  out += "\n[initial]\n";
  const int d = sc.model.dim;
  auto recipe = [&](const std::string& s) { return quoted(format_recipe(parse_recipe(s, d))); };
  kv("u0", recipe(sc.initial.u0));
  if (d == 1) {
    kv("q0", recipe(sc.initial.q0.empty() ? "" : sc.initial.q0[0]));
  } else {
    kv("q0_1", recipe(sc.initial.q0.size() > 0 ? sc.initial.q0[0] : ""));
    kv("q0_2", recipe(sc.initial.q0.size() > 1 ? sc.initial.q0[1] : ""));
  }
  kv("q0_potential", recipe(sc.initial.q0_potential));
  kv("snapshot", quoted(sc.initial.snapshot));
  kv("preset", quoted(sc.initial.preset));
  kv("preset_amplitude", num(sc.initial.preset_amplitude));
  kv("preset_band", std::to_string(sc.initial.preset_band));
  out += "\n[hypotheses]\n";
  kv("u0_nonnegative", sc.hypotheses.u0_nonnegative ? "true" : "false");
  kv("irrotational", sc.hypotheses.irrotational ? "true" : "false");
  std::string monitors;
  for (std::size_t i = 0; i < sc.hypotheses.monitors.size(); ++i) {
    monitors += (i ? ", " : "") + std::string(to_string(sc.hypotheses.monitors[i]));
  }
  kv("monitors", monitors);
  kv("monitor_tolerance", num(sc.hypotheses.monitor_tolerance));
  out += "\n[output]\n";
  kv("csv", quoted(sc.output.csv));
  kv("snapshot_every", std::to_string(sc.output.snapshot_every));
  kv("snapshot_prefix", quoted(sc.output.snapshot_prefix));
  out += "\n[verify]\n";
  kv("tol_energy", num(sc.verify.tol_energy));
  kv("tol_h1", num(sc.verify.tol_h1));
  kv("tol_h2", num(sc.verify.tol_h2));
  kv("tol_h1_2d", num(sc.verify.tol_h1_2d));
  out += "\n[sweep]\n";
  kv("alphas", join(sc.sweep.alphas));
  kv("amplitudes", join(sc.sweep.amplitudes));
  kv("csv", quoted(sc.sweep.csv));
  out += "\n[scaling]\n";
  kv("lambda", num(sc.scaling_lambda));
  out += "\n[sobolev]\n";
  kv("budget", std::to_string(sc.sobolev_budget));
  return out;
}

// --- initial data and hypotheses ---------------------------------------------

namespace {

SpectralField random_mean_zero(const Grid& g, int band, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SpectralField f(g);
  const int lo = g.dim() == 1 ? 0 : -band;
  const int hi = g.dim() == 1 ? 0 : band;
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = lo; k2 <= hi; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double scale = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      const double re = dist(rng);
      const double im = dist(rng);
      f.add_mode({k1, k2}, scale * Complex(re, im));
    }
  }
  return f;
}

}  // namespace

State initial_state(const Scenario& sc) {
  const int d = sc.model.dim;
  if (!sc.initial.snapshot.empty()) {
    Snapshot snap;
    try {
      snap = read_snapshot(sc.initial.snapshot);
    } catch (const std::exception& e) {
      throw ConfigError("snapshot", 0, e.what());
    }
    if (snap.state.grid().dim() != d || snap.state.grid().n() != sc.n) {
      throw ConfigError("snapshot", 0,
                        fmt::format("snapshot grid d={} n={} does not match scenario d={} n={}",
                                    snap.state.grid().dim(), snap.state.grid().n(), d, sc.n));
    }
    return snap.state;
  }

  const Grid g(d, sc.n);
  if (!sc.initial.preset.empty()) {
    std::mt19937_64 rng(sc.seed);
    const double a = sc.initial.preset_amplitude;
    SpectralField u = a * random_mean_zero(g, sc.initial.preset_band, rng);
    u.add_cosine({0, 0}, 1.0);
    const VectorField q = a * gradient(random_mean_zero(g, sc.initial.preset_band, rng));
    return State(0.0, std::move(u), q);
  }

  auto field = [&](const std::string& key, const std::string& recipe) {
    try {
      return realize(parse_recipe(recipe, d), g);
    } catch (const std::exception& e) {
      throw ConfigError(key, 0, e.what());
    }
  };
  SpectralField u = field("u0", sc.initial.u0);
  VectorField q(g);
  if (!sc.initial.q0_potential.empty()) {
    q = gradient(field("q0_potential", sc.initial.q0_potential));
  } else {
    for (int i = 0; i < d && i < static_cast<int>(sc.initial.q0.size()); ++i) {
      q[i] = field(d == 1 ? "q0" : fmt::format("q0_{}", i + 1), sc.initial.q0[i]);
    }
  }
  return State(0.0, std::move(u), std::move(q));
}

void check_hypotheses(const Scenario& sc, const State& s) {
  const auto& hyp = sc.hypotheses;
  if (hyp.u0_nonnegative) {
    FourierTransform t(s.grid());
    const auto values = t.inverse(s.u);
    const double lo = *std::min_element(values.begin(), values.end());
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (lo < -1e-14 * std::max(1.0, scale)) {
      throw ConfigError("u0", 0, fmt::format("u0 >= 0 declared but min u0 = {:.6g} on the grid", lo));
    }
  }
  if (needs_mean_zero_q(hyp.monitors)) {
    for (int i = 0; i < s.q.dim(); ++i) {
      const double m = mean(s.q[i]);
      if (std::abs(m) > 1e-14) {
        throw ConfigError("monitors", 0,
                          fmt::format("declared monitors need mean-zero q0, but <q0_{}> = {:.6g}", i + 1, m));
      }
    }
  }
  if (hyp.irrotational && s.grid().dim() == 2) {
    const double curl = sobolev_norm(curl2d(s.q), 0.0);
    const double size = std::sqrt(sobolev_norm_sq(s.q, 1.0));
    if (curl > 1e-12 * size) {
      throw ConfigError("irrotational", 0,
                        fmt::format("irrotational declared but ||curl q0|| = {:.6g} (use q0_potential)", curl));
    }
  }
}

Problem make_problem(const Scenario& sc) {
  Problem pb;
  pb.model = sc.model;
  pb.settings = sc.settings;
  pb.initial = initial_state(sc);
  check_hypotheses(sc, pb.initial);
  if (!(pb.settings.t_end > pb.initial.t)) {
    throw ConfigError("t_end", 0, fmt::format("t_end must exceed the initial time {:g}", pb.initial.t));
  }
  pb.irrotational = sc.model.dim == 1 || sc.hypotheses.irrotational;
  return pb;
}

}  // namespace fracchemo
