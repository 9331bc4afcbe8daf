#include "hrrm/scenario/parse.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hrrm/core/error.hpp"

namespace hrrm::scenario {

using json = nlohmann::ordered_json;

namespace {

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

/// Reads one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  void number(const std::string& key, double& out) {
    if (const json* v = child(key)) {
      if (!v->is_number()) throw ValidationError(path(key), "expected a number");
      out = v->get<double>();
    }
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (const json* v = child(key); v != nullptr && !v->is_null()) {
      if (!v->is_number()) throw ValidationError(path(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = child(key)) {
      const auto x = as_integer(*v, path(key));
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ValidationError(path(key), "integer out of range");
      }
      out = static_cast<int>(x);
    }
  }

  void count(const std::string& key, std::uint64_t& out) {
    if (const json* v = child(key)) out = as_count(*v, path(key));
  }

  void count(const std::string& key, std::optional<std::uint64_t>& out) {
    if (const json* v = child(key); v != nullptr && !v->is_null()) out = as_count(*v, path(key));
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = child(key)) {
      if (!v->is_boolean()) throw ValidationError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void boolean(const std::string& key, std::optional<bool>& out) {
    if (const json* v = child(key); v != nullptr && !v->is_null()) {
      if (!v->is_boolean()) throw ValidationError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = child(key)) {
      if (!v->is_string()) throw ValidationError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ValidationError(path(it.key()), "unknown key");
    }
  }

  static std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(
                                                              std::numeric_limits<std::int64_t>::max())) {
      throw ValidationError(path, "integer out of range");
    }
    return v.get<std::int64_t>();
  }

  static std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
      throw ValidationError(path, "must be non-negative");
    }
    return v.get<std::uint64_t>();
  }

  static std::uint32_t as_id(const json& v, const std::string& path) {
    const std::uint64_t x = as_count(v, path);
    if (x > std::numeric_limits<std::uint32_t>::max()) throw ValidationError(path, "id out of range");
    return static_cast<std::uint32_t>(x);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

const json& array_at(const json* v, const std::string& path) {
  if (!v->is_array()) throw ValidationError(path, "expected an array");
  return *v;
}

Position read_position(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(path, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

template <class Enum, class Parser>
Enum read_enum(const json& v, const std::string& path, Parser parse, const char* choices) {
  if (!v.is_string()) throw ValidationError(path, std::string("expected one of ") + choices);
  auto parsed = parse(v.get<std::string>());
  if (!parsed) throw ValidationError(path, std::string("expected one of ") + choices);
  return *parsed;
}

template <class Enum, class Parser>
void read_enum_field(ObjectReader& r, const std::string& key, Enum& out, Parser parse,
                     const char* choices) {
  if (const json* v = r.child(key)) out = read_enum<Enum>(*v, r.path(key), parse, choices);
}

constexpr const char* kClasses = "embb, mmtc, urllc, legacy_mbb";

TrafficClass read_class_key(const std::string& key, const std::string& path) {
  auto cls = parse_traffic_class(key);
  if (!cls) throw ValidationError(path, std::string("unknown traffic class; expected one of ") + kClasses);
  return *cls;
}

CellConfig read_cell(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  CellConfig c;
  const json* id = r.child("id");
  if (id == nullptr) throw ValidationError(r.path("id"), "required");
  c.id = CellId{ObjectReader::as_id(*id, r.path("id"))};
  r.text("rat", c.rat_tag);
  read_enum_field(r, "class", c.cell_class, parse_cell_class, "macro, small, ap");
  r.number("carrier_hz", c.carrier_hz);
  r.integer("prbs", c.prbs);
  r.integer("numerology", c.numerology);
  r.number("prb_bandwidth_hz", c.prb_bandwidth_hz);
  if (const json* v = r.child("position")) c.position = read_position(*v, r.path("position"));
  r.number("tx_power_dbm", c.tx_power_dbm);
  r.number("waveform_eff", c.waveform_eff);
  r.text("site", c.site);
  r.boolean("supports_duplication", c.supports_duplication);
  r.boolean("supports_secondary", c.supports_secondary);
  r.number("drop_probability", c.drop_probability);
  if (const json* v = r.child("portions")) {
    const json& arr = array_at(v, r.path("portions"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader pr(arr[i], index_path(r.path("portions"), i));
      mac::PortionSpec p;
      pr.text("label", p.label);
      pr.text("requires", p.required_capability);
      pr.number("waveform_eff", p.waveform_eff);
      pr.finish();
      c.portions.push_back(std::move(p));
    }
  }
  r.finish();
  return c;
}

UeConfig read_ue(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  UeConfig u;
  const json* id = r.child("id");
  if (id == nullptr) throw ValidationError(r.path("id"), "required");
  u.id = UeId{ObjectReader::as_id(*id, r.path("id"))};
  if (const json* v = r.child("position")) u.position = read_position(*v, r.path("position"));
  if (const json* v = r.child("velocity")) u.velocity = read_position(*v, r.path("velocity"));
  if (const json* v = r.child("capabilities")) {
    const json& arr = array_at(v, r.path("capabilities"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        throw ValidationError(index_path(r.path("capabilities"), i), "expected a string");
      }
      u.capabilities.insert(arr[i].get<std::string>());
    }
  }
  if (const json* v = r.child("serving"); v != nullptr && !v->is_null()) {
    u.serving = CellId{ObjectReader::as_id(*v, r.path("serving"))};
  }
  if (const json* v = r.child("secondaries")) {
    const json& arr = array_at(v, r.path("secondaries"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      u.secondaries.push_back(CellId{ObjectReader::as_id(arr[i], index_path(r.path("secondaries"), i))});
    }
  }
  r.number("target_bps", u.target_bps);
  r.finish();
  return u;
}

FlowConfig read_flow(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  FlowConfig f;
  const json* id = r.child("id");
  if (id == nullptr) throw ValidationError(r.path("id"), "required");
  f.id = FlowId{ObjectReader::as_id(*id, r.path("id"))};
  const json* ue = r.child("ue");
  if (ue == nullptr) throw ValidationError(r.path("ue"), "required");
  f.ue = UeId{ObjectReader::as_id(*ue, r.path("ue"))};
  read_enum_field(r, "class", f.cls, parse_traffic_class, kClasses);
  r.text("slice", f.slice);
  if (const json* g = r.child("generator")) {
    ObjectReader gr(*g, r.path("generator"));
    read_enum_field(gr, "kind", f.generator.kind, parse_generator_kind,
                    "full_buffer, poisson_sporadic, periodic_deadline");
    gr.number("packet_bits", f.generator.packet_bits);
    gr.number("buffer_bits", f.generator.buffer_bits);
    gr.number("rate_per_slot", f.generator.rate_per_slot);
    gr.count("period_slots", f.generator.period_slots);
    gr.count("offset_slots", f.generator.offset_slots);
    gr.count("deadline_slots", f.generator.deadline_slots);
    gr.finish();
  }
  r.integer("sps_period_slots", f.sps_period_slots);
  r.integer("sps_prbs", f.sps_prbs);
  r.finish();
  return f;
}

void read_mac(const json& node, MacSettings& m) {
  ObjectReader r(node, "mac");
  r.integer("epoch_slots", m.epoch_slots);
  r.integer("min_guarantee", m.min_guarantee);
  r.integer("access_cost_prbs", m.access_cost_prbs);
  r.integer("backoff_min_epochs", m.backoff_min_epochs);
  r.integer("backoff_max_epochs", m.backoff_max_epochs);
  r.number("pf_ewma", m.pf_ewma);
  read_enum_field(r, "partition_by", m.partition_by, mac::parse_partition_by,
                  "traffic_class, slice");
  if (const json* v = r.child("schedulers")) {
    ObjectReader sr(*v, r.path("schedulers"));
    for (auto it = v->begin(); it != v->end(); ++it) {
      const std::string p = sr.path(it.key());
      sr.child(it.key());
      m.class_schedulers[read_class_key(it.key(), p)] = read_enum<mac::SchedulerKind>(
          it.value(), p, mac::parse_scheduler_kind, "dynamic, semi_persistent, one_shot");
    }
  }
  r.finish();
}

void read_pdcp(const json& node, PdcpSettings& d) {
  ObjectReader r(node, "pdcp");
  if (const json* v = r.child("modes")) {
    ObjectReader mr(*v, r.path("modes"));
    for (auto it = v->begin(); it != v->end(); ++it) {
      const std::string p = mr.path(it.key());
      mr.child(it.key());
      d.service_modes[read_class_key(it.key(), p)] = read_enum<pdcp::FlowMode>(
          it.value(), p, pdcp::parse_flow_mode, "aggregate, load_balance, duplicate");
    }
  }
  r.number("leave_above", d.leave_above);
  r.number("join_below", d.join_below);
  r.count("t_reorder_slots", d.t_reorder_slots);
  r.finish();
}

std::vector<std::string> read_strings(const json* v, const std::string& path) {
  const json& arr = array_at(v, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw ValidationError(index_path(path, i), "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

void read_uts(const json& node, UtsSettings& u) {
  ObjectReader r(node, "uts");
  r.boolean("enabled", u.enabled);
  r.count("epoch_slots", u.epoch_slots);
  if (const json* v = r.child("features")) u.features = read_strings(v, r.path("features"));
  if (const json* v = r.child("ranking")) u.ranking = read_strings(v, r.path("ranking"));
  if (const json* v = r.child("thresholds")) {
    ObjectReader tr(*v, r.path("thresholds"));
    for (auto it = v->begin(); it != v->end(); ++it) {
      tr.child(it.key());
      ObjectReader fr(it.value(), tr.path(it.key()));
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        double value = 0.0;
        fr.number(jt.key(), value);
        u.thresholds[it.key()][jt.key()] = value;
      }
    }
  }
  r.count("hysteresis_epochs", u.hysteresis_epochs);
  r.count("time_to_trigger", u.time_to_trigger);
  r.finish();
}

void read_channel(const json& node, ChannelSettings& c) {
  ObjectReader r(node, "channel");
  r.number("fading_scale", c.fading_scale);
  r.number("interference_margin_db", c.interference_margin_db);
  r.number("macro_exponent", c.macro_exponent);
  r.number("small_exponent", c.small_exponent);
  r.number("min_distance_m", c.min_distance_m);
  r.count("seed", c.seed);
  r.finish();
}

void read_sim(const json& node, SimSettings& s) {
  ObjectReader r(node, "sim");
  r.count("horizon_slots", s.horizon_slots);
  r.count("seed", s.seed);
  r.finish();
}

ScenarioConfig from_json(const json& root) {
  ScenarioConfig config;
  ObjectReader r(root, "");
  r.text("name", config.name);
  r.text("tag", config.tag);
  if (const json* v = r.child("network")) {
    ObjectReader nr(*v, "network");
    if (const json* cells = nr.child("cells")) {
      const json& arr = array_at(cells, "network.cells");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        config.cells.push_back(read_cell(arr[i], index_path("network.cells", i)));
      }
    }
    nr.finish();
  }
  if (const json* v = r.child("ues")) {
    const json& arr = array_at(v, "ues");
    for (std::size_t i = 0; i < arr.size(); ++i) config.ues.push_back(read_ue(arr[i], index_path("ues", i)));
  }
  if (const json* v = r.child("traffic")) {
    ObjectReader tr(*v, "traffic");
    if (const json* flows = tr.child("flows")) {
      const json& arr = array_at(flows, "traffic.flows");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        config.flows.push_back(read_flow(arr[i], index_path("traffic.flows", i)));
      }
    }
    tr.finish();
  }
  if (const json* v = r.child("mac")) read_mac(*v, config.mac);
  if (const json* v = r.child("pdcp")) read_pdcp(*v, config.pdcp);
  if (const json* v = r.child("uts")) read_uts(*v, config.uts);
  if (const json* v = r.child("channel")) read_channel(*v, config.channel);
  if (const json* v = r.child("sim")) read_sim(*v, config.sim);
  r.finish();
  return config;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json position_json(Position p) { return json::array({p.x, p.y}); }

json to_json(const ScenarioConfig& config) {
  json root;
  root["name"] = config.name;
  root["tag"] = config.tag;

  json cells = json::array();
  for (const auto& c : config.cells) {
    json j;
    j["id"] = c.id.value;
    j["rat"] = c.rat_tag;
    j["class"] = to_string(c.cell_class);
    j["carrier_hz"] = c.carrier_hz;
    j["prbs"] = c.prbs;
    j["numerology"] = c.numerology;
    if (c.prb_bandwidth_hz) j["prb_bandwidth_hz"] = *c.prb_bandwidth_hz;
    j["position"] = position_json(c.position);
    j["tx_power_dbm"] = c.tx_power_dbm;
    j["waveform_eff"] = c.waveform_eff;
    j["site"] = c.site;
    if (c.supports_duplication) j["supports_duplication"] = *c.supports_duplication;
    if (c.supports_secondary) j["supports_secondary"] = *c.supports_secondary;
    j["drop_probability"] = c.drop_probability;
    json portions = json::array();
    for (const auto& p : c.portions) {
      portions.push_back({{"label", p.label}, {"requires", p.required_capability},
                          {"waveform_eff", p.waveform_eff}});
    }
    j["portions"] = portions;
    cells.push_back(j);
  }
  root["network"] = {{"cells", cells}};

  json ues = json::array();
  for (const auto& u : config.ues) {
    json j;
    j["id"] = u.id.value;
    j["position"] = position_json(u.position);
    j["velocity"] = position_json(u.velocity);
    j["capabilities"] = json::array();
    for (const auto& cap : u.capabilities) j["capabilities"].push_back(cap);
    if (u.serving) j["serving"] = u.serving->value;
    j["secondaries"] = json::array();
    for (const auto& s : u.secondaries) j["secondaries"].push_back(s.value);
    j["target_bps"] = u.target_bps;
    ues.push_back(j);
  }
  root["ues"] = ues;

  json flows = json::array();
  for (const auto& f : config.flows) {
    json j;
    j["id"] = f.id.value;
    j["ue"] = f.ue.value;
    j["class"] = to_string(f.cls);
    j["slice"] = f.slice;
    const auto& g = f.generator;
    j["generator"] = {{"kind", to_string(g.kind)},
                      {"packet_bits", g.packet_bits},
                      {"buffer_bits", g.buffer_bits},
                      {"rate_per_slot", g.rate_per_slot},
                      {"period_slots", g.period_slots},
                      {"offset_slots", g.offset_slots},
                      {"deadline_slots", g.deadline_slots}};
    j["sps_period_slots"] = f.sps_period_slots;
    j["sps_prbs"] = f.sps_prbs;
    flows.push_back(j);
  }
  root["traffic"] = {{"flows", flows}};

  json schedulers;
  for (const auto& [cls, kind] : config.mac.class_schedulers) {
    schedulers[std::string(to_string(cls))] = to_string(kind);
  }
  root["mac"] = {{"epoch_slots", config.mac.epoch_slots},
                 {"min_guarantee", config.mac.min_guarantee},
                 {"access_cost_prbs", config.mac.access_cost_prbs},
                 {"backoff_min_epochs", config.mac.backoff_min_epochs},
                 {"backoff_max_epochs", config.mac.backoff_max_epochs},
                 {"pf_ewma", config.mac.pf_ewma},
                 {"partition_by", to_string(config.mac.partition_by)},
                 {"schedulers", schedulers}};

  json modes;
  for (const auto& [cls, mode] : config.pdcp.service_modes) {
    modes[std::string(to_string(cls))] = pdcp::to_string(mode);
  }
  root["pdcp"] = {{"modes", modes},
                  {"leave_above", config.pdcp.leave_above},
                  {"join_below", config.pdcp.join_below},
                  {"t_reorder_slots", config.pdcp.t_reorder_slots}};

  json thresholds = json::object();
  for (const auto& [f, th] : config.uts.thresholds) {
    json t = json::object();
    for (const auto& [k, v] : th) t[k] = v;
    thresholds[f] = t;
  }
  root["uts"] = {{"enabled", config.uts.enabled},
                 {"epoch_slots", config.uts.epoch_slots},
                 {"features", config.uts.features},
                 {"ranking", config.uts.ranking},
                 {"thresholds", thresholds},
                 {"hysteresis_epochs", config.uts.hysteresis_epochs},
                 {"time_to_trigger", config.uts.time_to_trigger}};

  json channel = {{"fading_scale", config.channel.fading_scale},
                  {"interference_margin_db", config.channel.interference_margin_db},
                  {"macro_exponent", config.channel.macro_exponent},
                  {"small_exponent", config.channel.small_exponent},
                  {"min_distance_m", config.channel.min_distance_m}};
  if (config.channel.seed) channel["seed"] = *config.channel.seed;
  root["channel"] = channel;
  root["sim"] = {{"horizon_slots", config.sim.horizon_slots}, {"seed", config.sim.seed}};
  return root;
}

}  // namespace

ScenarioConfig parse_scenario_text(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(source + ":" + line_column(text, byte), what);
  }
  ScenarioConfig config = from_json(root);
  fill_defaults(config);
  validate(config);
  return config;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path.string());
}

std::string serialize_scenario(const ScenarioConfig& config) {
  return to_json(config).dump(2) + "\n";
}

}  // namespace hrrm::scenario
