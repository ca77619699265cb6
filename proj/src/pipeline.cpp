#include "cjtk/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cjtk/codec.hpp"
#include "cjtk/error.hpp"
#include "cjtk/extensions.hpp"
#include "cjtk/geoprocess.hpp"
#include "cjtk/gml_import.hpp"
#include "cjtk/ops.hpp"
#include "cjtk/validator.hpp"

namespace cjtk::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kErrors = 2;
constexpr int kUsage = 3;

const std::vector<std::string> kStages = {"validate", "compress", "decompress", "dedupe",   "clean",
                                          "subset",   "merge",    "partition",  "textures-path",
                                          "metadata", "info",     "import",     "save"};

bool is_stage(const std::string& s) { return std::find(kStages.begin(), kStages.end(), s) != kStages.end(); }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StageCall {
  std::string name;
  std::vector<std::string> args;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void parse_stage(CLI::App& app, const StageCall& call) {
  std::vector<std::string> reversed(call.args.rbegin(), call.args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
}

struct Unit {
  std::string part;  // empty for the whole model
  CityModel model;
};

class Pipeline {
 public:
  Pipeline(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  int execute(const std::vector<std::string>& args) {
    std::size_t i = 0;
    std::vector<std::string> extension_files;
    for (; i < args.size(); ++i) {
      const std::string& a = args[i];
      if (a == "--help" || a == "-h") {
        out_ << usage();
        return kOk;
      }
      if (a == "--extension") {
        if (i + 1 >= args.size()) return usage_error("", "--extension needs a file");
        extension_files.push_back(args[++i]);
      } else if (a.rfind("--extension=", 0) == 0) {
        extension_files.push_back(a.substr(12));
      } else if (a.size() > 1 && a[0] == '-' ) {
        return usage_error("", "unknown option '" + a + "'");
      } else {
        break;
      }
    }
    if (i >= args.size()) return usage_error("", "missing input");
    input_ = args[i++];
    std::vector<StageCall> calls;
    for (; i < args.size(); ++i) {
      if (is_stage(args[i])) {
        calls.push_back({args[i], {}});
      } else if (calls.empty()) {
        return usage_error("", "unknown subcommand '" + args[i] + "'");
      } else {
        calls.back().args.push_back(args[i]);
      }
    }
    if (calls.empty()) return usage_error("", "no stage given");

    std::string stage = "input";
    try {
      for (const auto& f : extension_files) exts_.push_back(load_extension(f));
      bytes_ = input_ == "-" ? std::string(std::istreambuf_iterator<char>(in_), {}) : read_file(input_);
      int status = kOk;
      for (const auto& call : calls) {
        stage = call.name;
        status = std::max(status, dispatch(call));
        if (status >= kErrors) return status;
      }
      return status;
    } catch (const UsageError& e) {
      return usage_error(stage, e.what());
    } catch (const ext::LoadError& e) {
      err_ << "cjtk: " << stage << ": extension rejected\n";
      for (const auto& f : e.findings()) err_ << "  " << to_string(f.code) << " " << f.path << ": " << f.message << "\n";
      return kErrors;
    } catch (const Error& e) {
      err_ << "cjtk: " << stage << ": " << e.what() << "\n";
      return kErrors;
    } catch (const std::exception& e) {
      err_ << "cjtk: " << stage << ": " << e.what() << "\n";
      return kErrors;
    }
  }

 private:
  int usage_error(const std::string& stage, const std::string& message) {
    err_ << "cjtk: " << (stage.empty() ? "" : stage + ": ") << message << "\n" << "run 'cjtk --help' for usage\n";
    return kUsage;
  }

  static ext::Extension load_extension(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("extension file '" + path + "' not found");
    return ext::load_extension_file(path);
  }

  // Extensions the model declares but the command line did not provide are
  // looked up as <name>.json in the CJTK_EXTENSIONS directories.
  void load_declared_extensions(const CityModel& model) {
    const char* env = std::getenv("CJTK_EXTENSIONS");
    if (!env || !*env) return;
    std::vector<std::string> dirs;
    std::stringstream ss(env);
    for (std::string d; std::getline(ss, d, ':');) {
      if (!d.empty()) dirs.push_back(d);
    }
    for (const auto& [name, ref] : model.extensions) {
      const bool have = std::any_of(exts_.begin(), exts_.end(), [&](const ext::Extension& e) { return e.name == name; });
      if (have) continue;
      for (const auto& d : dirs) {
        const fs::path candidate = fs::path(d) / (name + ".json");
        if (fs::exists(candidate)) {
          exts_.push_back(ext::load_extension_file(candidate.string()));
          break;
        }
      }
    }
  }

  std::vector<Unit>& units() {
    if (!units_) {
      units_.emplace();
      units_->push_back({"", codec::parse(bytes_).model});
    }
    return *units_;
  }

  template <class F>
  void each(F&& f) {
    for (auto& u : units()) u.model = f(u.model);
  }

  int dispatch(const StageCall& call) {
    const std::string& name = call.name;
    CLI::App app{"cjtk " + name, name};
    if (name == "validate") {
      bool jsonl = false;
      app.add_flag("--jsonl", jsonl, "JSON lines output");
      parse_stage(app, call);
      return validate(jsonl);
    }
    if (name == "compress") {
      int digits = 3;
      app.add_option("--digits", digits, "decimal digits kept")->check(CLI::Range(0, 12));
      parse_stage(app, call);
      each([&](const CityModel& m) { return geo::quantize(m, {digits, false}); });
      return kOk;
    }
    if (name == "decompress") {
      parse_stage(app, call);
      each([](const CityModel& m) { return m.transform ? geo::dequantize(m) : m; });
      return kOk;
    }
    if (name == "dedupe") {
      double tolerance = 0;
      app.add_option("--tolerance", tolerance, "merge distance in stored units")->check(CLI::NonNegativeNumber);
      parse_stage(app, call);
      each([&](const CityModel& m) { return geo::dedupe_vertices(m, tolerance); });
      return kOk;
    }
    if (name == "clean") {
      parse_stage(app, call);
      each([](const CityModel& m) { return geo::remove_orphan_vertices(m); });
      return kOk;
    }
    if (name == "subset") {
      std::vector<std::string> ids, types;
      std::vector<double> bbox;
      app.add_option("--id", ids, "object id (repeatable)");
      app.add_option("--type", types, "object type (repeatable)");
      app.add_option("--bbox", bbox, "minx miny maxx maxy")->expected(4);
      parse_stage(app, call);
      const int given = !ids.empty() + !types.empty() + !bbox.empty();
      if (given != 1) throw UsageError("give exactly one of --id, --type, --bbox");
      ops::Selector sel;
      if (!ids.empty()) {
        sel = ops::IdSelection{ids};
      } else if (!types.empty()) {
        sel = ops::TypeSelection{types};
      } else {
        sel = ops::BBoxSelection{{bbox[0], bbox[1], bbox[2], bbox[3]}};
      }
      each([&](const CityModel& m) { return ops::subset(m, sel); });
      return kOk;
    }
    if (name == "merge") {
      std::string policy = "error";
      std::vector<std::string> files;
      app.add_option("--policy", policy, "id clash policy")->check(CLI::IsMember({"error", "suffix"}));
      app.add_option("files", files, "models to merge in")->required();
      parse_stage(app, call);
      std::vector<CityModel> models;
      for (auto& u : units()) models.push_back(std::move(u.model));
      for (const auto& f : files) models.push_back(codec::parse(read_file(f)).model);
      CityModel merged = ops::merge(models, policy == "suffix" ? ops::IdPolicy::Suffix : ops::IdPolicy::Error);
      units_->clear();
      units_->push_back({"", std::move(merged)});
      return kOk;
    }
    if (name == "partition") {
      std::string grid;
      bool by_type = false;
      int random = 0;
      std::uint64_t seed = 0;
      app.add_option("--grid", grid, "NxM cells");
      app.add_flag("--by-type", by_type, "one part per object type");
      app.add_option("--random", random, "K random parts")->check(CLI::PositiveNumber);
      app.add_option("--seed", seed, "random seed");
      parse_stage(app, call);
      const int given = !grid.empty() + by_type + (random > 0);
      if (given != 1) throw UsageError("give exactly one of --grid, --by-type, --random");
      ops::PartitionStrategy strategy;
      if (!grid.empty()) {
        int nx = 0, ny = 0;
        char x = 0;
        std::istringstream gs(grid);
        if (!(gs >> nx >> x >> ny) || x != 'x' || nx < 1 || ny < 1 || gs.peek() != EOF) {
          throw UsageError("--grid expects NxM, got '" + grid + "'");
        }
        strategy = ops::GridStrategy{nx, ny};
      } else if (by_type) {
        strategy = ops::ByTypeStrategy{};
      } else {
        strategy = ops::RandomStrategy{random, seed};
      }
      std::vector<Unit> next;
      for (const auto& u : units()) {
        for (auto& p : ops::partition(u.model, strategy)) {
          next.push_back({u.part.empty() ? p.id : u.part + "_" + p.id, std::move(p.model)});
        }
      }
      *units_ = std::move(next);
      return kOk;
    }
    if (name == "textures-path") {
      std::string base;
      app.add_option("--base", base, "new texture directory")->required();
      parse_stage(app, call);
      each([&](const CityModel& m) { return ops::update_texture_paths(m, base); });
      return kOk;
    }
    if (name == "metadata") {
      parse_stage(app, call);
      each([](const CityModel& m) { return ops::refresh_metadata(m); });
      return kOk;
    }
    if (name == "info") {
      parse_stage(app, call);
      for (const auto& u : units()) {
        Json j = ops::to_json(ops::stats(u.model));
        if (!u.part.empty()) j["part"] = u.part;
        out_ << dump(j) << "\n";
      }
      return kOk;
    }
    if (name == "import") {
      std::string report_path;
      app.add_option("--report", report_path, "write the import report (JSON lines) here, '-' for stderr");
      parse_stage(app, call);
      if (units_) throw UsageError("import must be the first stage");
      auto result = gml::import_citygml(bytes_);
      if (report_path == "-") {
        err_ << result.report.to_jsonl();
      } else if (!report_path.empty()) {
        std::ofstream(report_path, std::ios::binary) << result.report.to_jsonl();
      }
      units_.emplace();
      units_->push_back({"", std::move(result.model)});
      return kOk;
    }
    // save
    bool pretty = false;
    std::string path;
    app.add_flag("--pretty", pretty, "indented output");
    app.add_option("path", path, "output file or '-'")->required();
    parse_stage(app, call);
    const auto mode = pretty ? codec::OutputMode::Pretty : codec::OutputMode::Minified;
    auto& us = units();
    if (path == "-") {
      if (pretty) throw UsageError("standard output is written minified only");
      if (us.size() != 1 || !us.front().part.empty()) throw UsageError("partitioned output needs a file name");
      out_ << codec::serialize(us.front().model) << "\n";
      return kOk;
    }
    for (const auto& u : us) {
      fs::path target(path);
      if (!u.part.empty()) target = target.parent_path() / ops::part_file_name(target.stem().string(), u.part);
      std::error_code ec;
      if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
      std::ofstream file(target, std::ios::binary);
      if (!file) throw UsageError("cannot write '" + target.string() + "'");
      file << codec::serialize(u.model, mode);
    }
    return kOk;
  }

  int validate(bool jsonl) {
    validate::ValidationReport report;
    if (!units_) {
      report = validate::validate(bytes_);
      if (report.valid()) units_.emplace(1, Unit{"", codec::parse(bytes_).model});
    } else {
      for (const auto& u : *units_) {
        report.append(validate::validate_structure(u.model));
        if (report.valid()) report.append(validate::validate_consistency(u.model));
      }
      report.sort();
    }
    if (units_ && report.valid()) {
      for (const auto& u : *units_) {
        load_declared_extensions(u.model);
        report.append(ext::validate_extended(u.model, exts_));
      }
      report.sort();
    }
    out_ << (jsonl ? validate::to_jsonl(report) : validate::to_text(report));
    return validate::exit_code(report);
  }

  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  std::string input_;
  std::string bytes_;
  std::vector<ext::Extension> exts_;
  std::optional<std::vector<Unit>> units_;
};

}  // namespace

std::string usage() {
  return "usage: cjtk [--extension FILE]... <input|-> stage [options] [stage [options]]...\n"
         "\n"
         "stages:\n"
         "  validate [--jsonl]                 report problems (exit 0 valid, 1 warnings, 2 errors)\n"
         "  compress [--digits D]              quantize vertices keeping D decimals (default 3)\n"
         "  decompress                         drop the transform\n"
         "  dedupe [--tolerance T]             merge duplicate vertices\n"
         "  clean                              drop unreferenced vertices\n"
         "  subset --id ID... | --type T... | --bbox X0 Y0 X1 Y1\n"
         "  merge [--policy error|suffix] FILE...\n"
         "  partition --grid NxM | --by-type | --random K [--seed S]\n"
         "  textures-path --base DIR\n"
         "  metadata                           refresh extent, LoDs and flags\n"
         "  info                               print statistics as JSON\n"
         "  import [--report FILE|-]           read the input as CityGML\n"
         "  save [--pretty] FILE|-             write the model (parts as FILE_<id>.json)\n"
         "\n"
         "CJTK_EXTENSIONS: ':'-separated directories searched for <name>.json extension files.\n";
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  return Pipeline(in, out, err).execute(args);
}

}  // namespace cjtk::cli
