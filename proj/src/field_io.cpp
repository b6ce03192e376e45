#include "mbo/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"

namespace mbo {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field payloads are written in host order, which must be little-endian");

void write_header(const GridSpec& g, const char* dtype, std::ostream& out) {
  nlohmann::ordered_json h;
  h["dim"] = g.dim;
  h["cells_per_axis"] = g.cells;
  h["extent"] = g.extent;
  h["dtype"] = dtype;
  out.write(kFieldMagic, 8);
  out << h.dump() << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_field(const ScalarField& field, std::ostream& out) {
  write_header(field.grid, "f64", out);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
}

void write_field(const PhaseField& phase, std::ostream& out) {
  write_header(phase.grid, "u8", out);
  out.write(reinterpret_cast<const char*>(phase.bits.data()),
            static_cast<std::streamsize>(phase.bits.size()));
}

void write_field(const ScalarField& field, const std::string& path) {
  auto out = open_out(path);
  write_field(field, out);
}

void write_field(const PhaseField& phase, const std::string& path) {
  auto out = open_out(path);
  write_field(phase, out);
}

AnyField read_field(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kFieldMagic, 8) != 0)
    throw Error(ErrorKind::Header, "bad magic");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Header, "missing header line");
  GridSpec g;
  std::string dtype;
  try {
    const auto h = nlohmann::json::parse(line);
    g.dim = h.at("dim").get<int>();
    g.cells = h.at("cells_per_axis").get<int>();
    g.extent = h.at("extent").get<double>();
    dtype = h.at("dtype").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Header, std::string("malformed header: ") + e.what());
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Header, e.what());
  }
  if (dtype != "f64" && dtype != "u8") throw Error(ErrorKind::Header, "unknown dtype " + dtype);

  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t width = dtype == "f64" ? sizeof(double) : 1;
  if (payload.size() != g.size() * width)
    throw Error(ErrorKind::SizeMismatch, "payload has " + std::to_string(payload.size()) +
                                             " bytes, expected " +
                                             std::to_string(g.size() * width));
  if (dtype == "f64") {
    ScalarField f(g);
    std::memcpy(f.values.data(), payload.data(), payload.size());
    return f;
  }
  PhaseField p(g);
  std::memcpy(p.bits.data(), payload.data(), payload.size());
  for (auto b : p.bits)
    if (b > 1) throw Error(ErrorKind::Header, "u8 payload holds values other than 0/1");
  return p;
}

AnyField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_field(in);
}

void write_pgm(const PhaseField& phase, const std::string& path) {
  if (phase.grid.dim != 2) throw Error(ErrorKind::InvalidArgument, "PGM export is 2D only");
  auto out = open_out(path);
  out << "P5\n" << phase.grid.cells << ' ' << phase.grid.cells << "\n255\n";
  std::string row(phase.bits.size(), '\0');
  for (std::size_t i = 0; i < phase.bits.size(); ++i) row[i] = phase.bits[i] ? '\xff' : '\0';
  out.write(row.data(), static_cast<std::streamsize>(row.size()));
}

}  // namespace mbo
