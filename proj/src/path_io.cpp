#include "ssgauss/path_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ssgauss/errors.hpp"
#include "ssgauss/json_io.hpp"
#include "ssgauss/version.hpp"

namespace ssgauss {

namespace {
constexpr const char* kMagic = "SSGPATH1";
static_assert(std::endian::native == std::endian::little, "path files assume little-endian");
}  // namespace

std::string path_batch_header(const PathBatch& batch, const std::string& config_hash) {
  Json j;
  j["process"] = process_to_json(batch.spec);
  j["grid"] = grid_to_json(batch.grid);
  j["seed"] = batch.seed;
  j["method"] = to_string(batch.method);
  j["paths"] = batch.paths;
  j["layout"] = "path-major, then component, then time; origin omitted";
  j["sampler_report"] = sampler_report_to_json(batch.report);
  j["config_hash"] = config_hash;
  j["version"] = std::string(kLibraryVersion);
  return j.dump();
}

void write_path_batch(std::ostream& out, const PathBatch& batch, const std::string& config_hash) {
  out << kMagic << '\n' << path_batch_header(batch, config_hash) << '\n';
  out.write(reinterpret_cast<const char*>(batch.values.data()),
            static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  if (!out) throw NumericError("write_path_batch: write failed");
}

void write_path_batch(const std::string& filename, const PathBatch& batch,
                      const std::string& config_hash) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw ConfigError("out", "cannot open '" + filename + "' for writing");
  write_path_batch(out, batch, config_hash);
}

PathBatch read_path_batch(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw ConfigError("batch", "not a path batch file (bad magic line)");
  std::string header;
  std::getline(in, header);
  Json j;
  try {
    j = Json::parse(header);
  } catch (const std::exception& e) {
    throw ConfigError("batch", std::string("malformed header: ") + e.what());
  }
  PathBatch batch;
  batch.spec = process_from_json(j.at("process"));
  batch.grid = grid_from_json(j.at("grid"));
  batch.seed = j.at("seed").get<std::uint64_t>();
  batch.method = sampler_method_from_string(j.at("method").get<std::string>());
  batch.paths = j.at("paths").get<std::size_t>();
  batch.report.used = batch.method;
  batch.values.resize(batch.paths * batch.spec.dim * batch.grid.n);
  in.read(reinterpret_cast<char*>(batch.values.data()),
          static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(batch.values.size() * sizeof(double))) {
    throw ConfigError("batch", "truncated path data");
  }
  return batch;
}

PathBatch read_path_batch(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ConfigError("batch", "cannot open '" + filename + "'");
  return read_path_batch(in);
}

}  // namespace ssgauss
