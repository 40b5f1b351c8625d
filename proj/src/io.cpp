#include "hopf/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hopf {

static_assert(std::endian::native == std::endian::little,
              "HPF1 payload is little-endian; big-endian hosts need swaps");

using json = nlohmann::ordered_json;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

void write_field(const std::string& path, const Field& field,
                 std::optional<int> charge) {
  field.spec.validate();
  json header;
  header["version"] = kFieldFormatVersion;
  header["manifold"] = manifold_name(field.spec.kind);
  header["dims"] = field.spec.dims;
  if (field.spec.L) header["L"] = *field.spec.L;
  if (!field.spec.periods.empty()) header["periods"] = field.spec.periods;
  header["order"] = "last-axis-fastest";
  if (charge) header["charge"] = *charge;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "HPF1" << header.dump() << "\n";
  out.write(reinterpret_cast<const char*>(field.data.data()),
            std::streamsize(field.data.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

LoadedField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HPF1", 4) != 0)
    throw IoError("bad magic (not an HPF1 field file): " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) throw IoError("missing header: " + path);

  json header;
  try {
    header = json::parse(header_line);
  } catch (const std::exception& e) {
    throw IoError(std::string("bad header JSON: ") + e.what());
  }
  LoadedField lf;
  try {
    if (header.at("version").get<int>() != kFieldFormatVersion)
      throw IoError("unsupported field file version");
    auto kind = manifold_from_name(header.at("manifold").get<std::string>());
    if (!kind) throw IoError("unknown manifold in header");
    lf.field.spec.kind = *kind;
    lf.field.spec.dims = header.at("dims").get<std::vector<int>>();
    if (header.contains("L")) lf.field.spec.L = header["L"].get<double>();
    if (header.contains("periods"))
      lf.field.spec.periods = header["periods"].get<std::vector<double>>();
    if (header.contains("charge")) lf.charge = header["charge"].get<int>();
  } catch (const json::exception& e) {
    throw IoError(std::string("bad header: ") + e.what());
  }
  lf.field.spec.validate();

  std::int64_t count = 3 * lf.field.spec.n_sites();
  lf.field.data.resize(size_t(count));
  in.read(reinterpret_cast<char*>(lf.field.data.data()),
          std::streamsize(size_t(count) * sizeof(double)));
  if (in.gcount() != std::streamsize(size_t(count) * sizeof(double)))
    throw IoError("payload truncated: " + path);
  char extra;
  if (in.read(&extra, 1)) throw IoError("trailing bytes after payload: " + path);

  double worst = 0;
  for (std::int64_t s = 0; s < lf.field.n_sites(); ++s) {
    Vec3 v = lf.field.get(s);
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    worst = std::max(worst, std::abs(n - 1.0));
  }
  if (worst > 1e-6)
    throw IoError("site vectors are not unit norm (off by " +
                  std::to_string(worst) + ")");
  if (worst > 1e-9) lf.renormalized = true;
  lf.field.renormalize();
  return lf;
}

std::string RunReport::to_json() const {
  json j;
  j["manifold"] = manifold;
  j["dims"] = dims;
  j["Q"] = Q ? json(*Q) : json(nullptr);
  j["Q_numeric"] = Q_numeric ? json(*Q_numeric) : json(nullptr);
  j["residual"] = residual ? json(*residual) : json(nullptr);
  j["charge_method"] = charge_method;
  j["E4"] = E4;
  j["E2"] = E2;
  j["beta_final"] = beta_final;
  j["E_over_bound"] = E_over_bound ? json(*E_over_bound) : json(nullptr);
  j["E_x"] = E_x ? json(*E_x) : json(nullptr);
  j["E_y"] = E_y ? json(*E_y) : json(nullptr);
  j["E_z"] = E_z ? json(*E_z) : json(nullptr);
  j["kappa"] = kappa;
  j["converged"] = converged;
  j["discontinuous"] = discontinuous;
  j["iterations"] = iterations;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,E4,E2,grad_norm\n";
  for (const TraceRow& r : trace)
    os << r.iteration << "," << r.E4 << "," << r.E2 << "," << r.grad_norm
       << "\n";
  return os.str();
}

std::string profile_csv(const ProfileSolution& profile) {
  std::ostringstream os;
  os.precision(17);
  os << "x,f\n";
  for (size_t i = 0; i < profile.grid.size(); ++i)
    os << profile.grid[i] << "," << profile.f[i] << "\n";
  return os.str();
}

std::string curves_csv(const PreimageCurve& curves) {
  std::ostringstream os;
  os.precision(17);
  os << "component,vertex,x,y,z\n";
  for (size_t c = 0; c < curves.components.size(); ++c)
    for (size_t i = 0; i < curves.components[c].size(); ++i) {
      const Vec3& p = curves.components[c][i];
      os << c << "," << i << "," << p[0] << "," << p[1] << "," << p[2] << "\n";
    }
  return os.str();
}

}  // namespace hopf
