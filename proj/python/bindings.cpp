#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gossipsim/config.hpp"
#include "gossipsim/gossip.hpp"
#include "gossipsim/io.hpp"
#include "gossipsim/scheduler.hpp"
#include "gossipsim/sweep.hpp"

namespace py = pybind11;
using namespace gossipsim;

namespace {

SimConfig config_from(const std::string& text) {
  SimConfig cfg = config_from_json(nlohmann::json::parse(text));
  validate(cfg);
  return cfg;
}

std::string run_json(const std::string& config_text) {
  const SimConfig cfg = config_from(config_text);
  py::gil_scoped_release release;
  return to_json_line(run_simulation(cfg, resolve_inputs(cfg)));
}

std::string sweep_json(const std::string& grid_text, std::size_t replicates, std::size_t workers) {
  const SweepSpec spec = parse_sweep_spec(nlohmann::ordered_json::parse(grid_text));
  SweepOptions opt;
  opt.replicates = replicates;
  opt.workers = workers;
  SweepResult result;
  {
    py::gil_scoped_release release;
    result = run_sweep(spec, opt);
  }
  const AggregateResult agg = aggregate(result.records(), spec.group_by);
  nlohmann::ordered_json out;
  out["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) {
    if (r.record) {
      out["runs"].push_back(to_json(*r.record));
    } else {
      out["runs"].push_back({{"condition", r.condition}, {"replicate", r.replicate}, {"error", r.error}});
    }
  }
  out["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& row : agg.rows) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < agg.group_by.size(); ++i) j[agg.group_by[i]] = row.key[i];
    j["runs"] = row.runs;
    j["comparable_runs"] = row.comparable_runs;
    j["degenerate_runs"] = row.degenerate_runs;
    j["c_win_rate"] = row.c_win_rate;
    j["mean_relative_difference"] = row.mean_relative_difference;
    j["sd_relative_difference"] = row.sd_relative_difference;
    j["mean_total_resources"] = row.mean_total_resources;
    j["mean_absolute_difference"] = row.mean_absolute_difference;
    out["aggregate"].push_back(std::move(j));
  }
  out["failures"] = result.failures;
  out["warnings"] = agg.warnings;
  return out.dump();
}

std::vector<std::vector<double>> parallel(const std::vector<std::vector<double>>& image, const std::string& mode) {
  const std::size_t n = image.size();
  ImageMatrix img(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (image[i].size() != n) throw std::invalid_argument("image matrix must be square");
    for (std::size_t j = 0; j < n; ++j) img.set(i, j, image[i][j]);
  }
  const ReputationMatrix rep = parallel_update(img, parse_parallel_average(mode));
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = rep(i, j);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gossip and reputation Trust Game simulator";
  m.attr("__version__") = GOSSIPSIM_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("default_config_json", [] { return to_json(SimConfig{}).dump(); });
  m.def("normalize_config_json", [](const std::string& text) { return to_json(config_from(text)).dump(); },
        py::arg("config"));
  m.def("run_json", &run_json, py::arg("config"));
  m.def("sweep_json", &sweep_json, py::arg("grid"), py::arg("replicates") = 0, py::arg("workers") = 1);
  m.def("parallel_update", &parallel, py::arg("image"), py::arg("mode") = "informed");
  m.def("default_table_checksum", [] { return TriadicTable::default_table().checksum(); });
  m.def("describe_formats", &describe_formats);
}
