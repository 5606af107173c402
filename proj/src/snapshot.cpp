#include "fracchemo/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracchemo/fft.hpp"

namespace fracchemo {

namespace {

void put_le(std::ostream& out, std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void get_le(std::istream& in, std::span<double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw std::runtime_error("snapshot payload is truncated");
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
}

}  // namespace

void write_snapshot(std::ostream& out, const State& s, double alpha, Kinetics kinetics) {
  const Grid& g = s.grid();
  nlohmann::ordered_json header;
  header["format_version"] = kSnapshotFormatVersion;
  header["d"] = g.dim();
  header["n"] = g.n();
  header["alpha"] = alpha;
  header["t"] = s.t;
  header["kinetics"] = std::string(to_string(kinetics));
  std::vector<std::string> order{"u"};
  for (int i = 1; i <= g.dim(); ++i) order.push_back("q" + std::to_string(i));
  header["field_order"] = order;
  out << header.dump() << '\n';

  FourierTransform t(g);
  std::vector<double> buf(g.size());
  t.inverse(s.u, buf);
  put_le(out, buf);
  for (const auto& c : s.q) {
    t.inverse(c, buf);
    put_le(out, buf);
  }
  if (!out) throw std::runtime_error("failed to write snapshot");
}

void write_snapshot(const std::filesystem::path& path, const State& s, double alpha, Kinetics kinetics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(out, s, alpha, kinetics);
}

Snapshot read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("snapshot header missing");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("snapshot header is not JSON: ") + e.what());
  }
  Snapshot snap;
  int d = 0;
  int n = 0;
  try {
    if (header.at("format_version").get<int>() != kSnapshotFormatVersion) {
      throw std::runtime_error("unsupported snapshot format_version");
    }
    d = header.at("d").get<int>();
    n = header.at("n").get<int>();
    snap.alpha = header.at("alpha").get<double>();
    snap.kinetics = parse_kinetics(header.at("kinetics").get<std::string>());
    const auto order = header.at("field_order").get<std::vector<std::string>>();
    if (order.size() != static_cast<std::size_t>(d + 1) || order.front() != "u") {
      throw std::runtime_error("unexpected field_order in snapshot header");
    }
    snap.state.t = header.at("t").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad snapshot header: ") + e.what());
  }

  const Grid g(d, n);
  FourierTransform t(g);
  std::vector<double> buf(g.size());
  get_le(in, buf);
  SpectralField u = t.forward(buf);
  VectorField q(g);
  for (auto& c : q) {
    get_le(in, buf);
    c = t.forward(buf);
  }
  snap.state = State(snap.state.t, std::move(u), std::move(q));
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace fracchemo
