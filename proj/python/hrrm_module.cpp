#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hrrm/abstraction/common_unit.hpp"
#include "hrrm/abstraction/descriptor.hpp"
#include "hrrm/abstraction/link.hpp"
#include "hrrm/core/error.hpp"
#include "hrrm/core/metrics.hpp"
#include "hrrm/mac/partition.hpp"
#include "hrrm/mac/schedulers.hpp"
#include "hrrm/pdcp/receiver.hpp"
#include "hrrm/scenario/command.hpp"
#include "hrrm/scenario/outputs.hpp"
#include "hrrm/scenario/parse.hpp"
#include "hrrm/sim/world.hpp"

namespace py = pybind11;
using namespace hrrm;

namespace {

CarrierGrid make_grid(double carrier_hz, int prbs, int numerology,
                      std::optional<double> prb_bandwidth_hz) {
  return CarrierGrid(carrier_hz, prbs, numerology,
                     prb_bandwidth_hz.value_or(CarrierGrid::nominal_prb_bandwidth_hz(numerology)));
}

CellClass cell_class_of(const std::string& text) {
  auto cls = parse_cell_class(text);
  if (!cls) throw std::invalid_argument("unknown cell class '" + text + "'");
  return *cls;
}

py::dict describe(double carrier_hz, int prbs, int numerology, const std::string& cell_class,
                  double waveform_eff, double load, std::optional<bool> supports_duplication,
                  std::optional<bool> supports_secondary) {
  Cell cell{CellId(0), "", make_grid(carrier_hz, prbs, numerology, std::nullopt), {}, 0.0,
            cell_class_of(cell_class), waveform_eff, supports_duplication, supports_secondary};
  auto d = describe_cell(cell, load);
  py::dict out;
  out["capacity_score"] = d.capacity_score;
  out["latency_class"] = std::string(to_string(d.latency_class));
  out["coverage_class"] = std::string(to_string(d.coverage_class));
  out["supports_duplication"] = d.supports_duplication;
  out["supports_secondary"] = d.supports_secondary;
  out["current_load"] = d.current_load;
  return out;
}

std::pair<std::string, double> common_unit(const std::string& kind, double value,
                                           std::optional<double> reference) {
  auto m = to_common_unit(RawMeasurement{kind, value, reference});
  return {m.kind() == MeasureKind::signal_db ? "signal_db" : "load_fraction", m.value()};
}

std::vector<std::tuple<std::string, int, int>> partition(
    const std::vector<std::pair<std::string, std::int64_t>>& demands, int total,
    int min_guarantee) {
  mac::DemandVector dv;
  std::set<mac::PartitionKey> active;
  for (const auto& [label, prbs] : demands) {
    auto key = mac::PartitionKey::slice(label);
    dv.add(key, prbs);
    if (prbs > 0) active.insert(key);
  }
  auto plan = mac::partition_resources(dv, total, min_guarantee, active);
  std::vector<std::tuple<std::string, int, int>> out;
  for (const auto& e : plan.entries) out.emplace_back(e.key.label, e.interval.begin, e.interval.end);
  return out;
}

std::vector<std::tuple<int, std::uint32_t, double>> pf_schedule(
    int begin, int end, const std::vector<std::tuple<std::uint32_t, double, double, double>>& users) {
  std::vector<mac::PfUser> pf;
  for (const auto& [ue, backlog, inst, avg] : users) pf.push_back({UeId(ue), backlog, inst, avg});
  std::vector<std::tuple<int, std::uint32_t, double>> out;
  for (const auto& a : mac::schedule_dynamic({begin, end}, pf)) {
    out.emplace_back(a.prb, a.ue.value, a.bits);
  }
  return out;
}

py::dict one_shot_trial(int contenders, int opportunities, std::uint64_t seed) {
  std::vector<mac::Contender> cs;
  for (int i = 0; i < contenders; ++i) cs.push_back({UeId(static_cast<std::uint32_t>(i)), 1.0});
  RngStream rng(seed, RngSubsystem::access);
  std::size_t success = 0, collision = 0, deferred = 0;
  for (const auto& o : mac::schedule_one_shot(cs, opportunities, rng)) {
    if (o.result == mac::AccessResult::success) ++success;
    else if (o.result == mac::AccessResult::collision) ++collision;
    else ++deferred;
  }
  py::dict out;
  out["success"] = success;
  out["collision"] = collision;
  out["deferred"] = deferred;
  return out;
}

class Receiver {
 public:
  explicit Receiver(std::uint64_t t_reorder) { rx_.t_reorder = t_reorder; }

  std::vector<std::uint32_t> receive(std::uint32_t sn, std::uint64_t now) {
    return sns(pdcp::reorder_deliver(rx_, pdcp::Pdu{sn, 0.0, now}, now));
  }
  std::vector<std::uint32_t> expire(std::uint64_t now) {
    return sns(pdcp::expire_reorder_timer(rx_, now));
  }
  const pdcp::ReceiverState& state() const { return rx_; }

 private:
  static std::vector<std::uint32_t> sns(const std::vector<pdcp::Pdu>& pdus) {
    std::vector<std::uint32_t> out;
    for (const auto& p : pdus) out.push_back(p.sn);
    return out;
  }
  pdcp::ReceiverState rx_;
};

py::dict simulate_text(const std::string& text, std::optional<std::uint64_t> seed) {
  auto config = scenario::parse_scenario_text(text);
  sim::SimulationResult result;
  {
    py::gil_scoped_release release;
    result = sim::simulate(config, seed.value_or(config.sim.seed));
  }
  py::dict out;
  out["metrics_csv"] = scenario::metrics_csv(result.rows);
  out["summary_json"] = scenario::summary_json(result.report);
  out["events_log"] = scenario::events_log(result.events);
  return out;
}

std::tuple<int, std::string, std::string> command(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = scenario::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_hrrm, m) {
  m.doc() = "Hierarchical radio resource management simulator";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InsufficientResourcesError>(m, "InsufficientResourcesError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<UnknownKindError>(m, "UnknownKindError", base.ptr());

  m.def(
      "link_rate",
      [](double sinr_db, int n_prbs, double waveform_eff, double carrier_hz, int prbs,
         int numerology, std::optional<double> prb_bandwidth_hz) {
        return link_rate(sinr_db, n_prbs, waveform_eff,
                         make_grid(carrier_hz, prbs, numerology, prb_bandwidth_hz));
      },
      py::arg("sinr_db"), py::arg("n_prbs"), py::arg("waveform_eff"), py::arg("carrier_hz") = 3.5e9,
      py::arg("prbs") = 50, py::arg("numerology") = 0, py::arg("prb_bandwidth_hz") = py::none(),
      "Bits per slot carried by n_prbs PRBs at the given SINR.");

  m.def("describe_cell", &describe, py::arg("carrier_hz"), py::arg("prbs"), py::arg("numerology"),
        py::arg("cell_class") = "macro", py::arg("waveform_eff") = 0.75, py::arg("load") = 0.0,
        py::arg("supports_duplication") = py::none(), py::arg("supports_secondary") = py::none(),
        "Capability descriptor of a cell as a dict.");

  m.def("to_common_unit", &common_unit, py::arg("kind"), py::arg("value"),
        py::arg("reference") = py::none(),
        "Translates a raw measurement; returns (unit, value).");

  m.def("compute_fairness",
        [](const std::vector<double>& v) { return compute_fairness(v); }, py::arg("throughputs"));

  m.def("partition_resources", &partition, py::arg("demands"), py::arg("total"),
        py::arg("min_guarantee") = 1,
        "Splits total PRBs among (label, demand) pairs; returns (label, begin, end).");

  m.def("split_portions",
        [](const std::vector<std::int64_t>& d, int total) { return mac::split_portions(d, total); },
        py::arg("demands"), py::arg("total"));

  m.def("schedule_dynamic", &pf_schedule, py::arg("begin"), py::arg("end"), py::arg("users"),
        "Proportional-fair PRB grants for (ue, backlog_bits, bits_per_prb, average) users.");

  m.def("one_shot_trial", &one_shot_trial, py::arg("contenders"), py::arg("opportunities"),
        py::arg("seed"));

  py::class_<pdcp::ReceiverState>(m, "ReceiverState")
      .def_readonly("expected_sn", &pdcp::ReceiverState::expected_sn)
      .def_readonly("delivered", &pdcp::ReceiverState::delivered)
      .def_readonly("duplicates", &pdcp::ReceiverState::duplicates)
      .def_readonly("lost", &pdcp::ReceiverState::lost);

  py::class_<Receiver>(m, "Receiver")
      .def(py::init<std::uint64_t>(), py::arg("t_reorder") = pdcp::kDefaultReorderSlots)
      .def("receive", &Receiver::receive, py::arg("sn"), py::arg("now"))
      .def("expire", &Receiver::expire, py::arg("now"))
      .def_property_readonly("state", &Receiver::state, py::return_value_policy::reference_internal);

  m.def(
      "normalize_scenario",
      [](const std::string& text) {
        return scenario::serialize_scenario(scenario::parse_scenario_text(text));
      },
      py::arg("text"), "Parses, validates and re-serializes scenario text.");

  m.def("simulate", &simulate_text, py::arg("text"), py::arg("seed") = py::none(),
        "Runs scenario text; returns the three output files as strings.");

  m.def("run_command", &command, py::arg("args"),
        "Command-line entry point; returns (exit_code, stdout, stderr).");
}
