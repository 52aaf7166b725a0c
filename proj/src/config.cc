// Copyright 2026 The Ordest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ordest/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ordest/error.h"

namespace ordest {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& why) {
  throw Error(ErrorCode::kConfigError, why);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

// Typed getters with a named error instead of nlohmann's type_error.
template <typename T>
T get_as(const json& v, const std::string& name) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    fail("field '" + name + "' has the wrong type");
  }
}

Support support_from(const json& v, const std::string& name) {
  const auto lu = get_as<std::vector<int64_t>>(v, name);
  if (lu.size() != 2) fail("field '" + name + "' must be [l, u]");
  try {
    return Support(lu[0], lu[1]);
  } catch (const Error& e) {
    fail("field '" + name + "': " + e.what());
  }
}

InstanceSpec instance_from(const json& v) {
  check_keys(v, {"name", "series", "support", "min_records"}, "instance");
  if (!v.contains("name") || !v.contains("series") || !v.contains("support")) {
    fail("instance needs name, series and support");
  }
  InstanceSpec s{get_as<std::string>(v["name"], "name"),
                 get_as<std::vector<std::string>>(v["series"], "series"),
                 support_from(v["support"], "support"), 80};
  if (v.contains("min_records")) {
    s.min_records = get_as<int64_t>(v["min_records"], "min_records");
  }
  return s;
}

std::vector<InstanceSpec> instances_from(const json& v) {
  if (!v.is_array()) fail("instances must be an array");
  std::vector<InstanceSpec> out;
  for (const json& item : v) out.push_back(instance_from(item));
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path);
  return ss.str();
}

std::vector<InstanceSpec> parse_instance_specs(std::string_view json_text) {
  return instances_from(parse_json(json_text));
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc,
             {"mode", "methods", "n_grid", "trials", "seed", "solver", "kde",
              "support", "components", "chain_lengths", "spacing", "sigma2",
              "input_path", "instances", "out_dir", "workers",
              "record_wallclock"},
             "config");
  ExperimentConfig cfg;
  if (doc.contains("mode")) {
    const auto m = parse_mode(get_as<std::string>(doc["mode"], "mode"));
    if (!m) fail("unknown mode");
    cfg.mode = *m;
  }
  if (doc.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_as<std::vector<std::string>>(doc["methods"], "methods")) {
      const auto m = parse_method(name);
      if (!m) fail("unknown method '" + name + "'");
      cfg.methods.push_back(*m);
    }
  }
  if (doc.contains("n_grid")) cfg.n_grid = get_as<std::vector<int>>(doc["n_grid"], "n_grid");
  if (doc.contains("trials")) {
    cfg.trials = get_as<int>(doc["trials"], "trials");
    if (cfg.trials < 1) fail("trials must be >= 1");
  }
  if (doc.contains("seed")) cfg.seed = get_as<uint64_t>(doc["seed"], "seed");
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    check_keys(s, {"time_limit_s", "gap_tol", "node_limit", "mode_bound"}, "solver");
    if (s.contains("time_limit_s")) {
      cfg.solver.time_limit_s = get_as<double>(s["time_limit_s"], "time_limit_s");
    }
    if (s.contains("gap_tol")) cfg.solver.gap_tol = get_as<double>(s["gap_tol"], "gap_tol");
    if (s.contains("node_limit")) {
      cfg.solver.node_limit = get_as<int64_t>(s["node_limit"], "node_limit");
    }
    if (s.contains("mode_bound")) {
      cfg.solver.mode_bound = get_as<bool>(s["mode_bound"], "mode_bound");
    }
  }
  if (doc.contains("kde")) {
    const json& k = doc["kde"];
    check_keys(k, {"bandwidth_grid", "folds", "seed", "bandwidth_unit"}, "kde");
    if (k.contains("bandwidth_grid")) {
      cfg.kde.bandwidth_grid =
          get_as<std::vector<double>>(k["bandwidth_grid"], "bandwidth_grid");
    }
    if (k.contains("folds")) cfg.kde.folds = get_as<int>(k["folds"], "folds");
    if (k.contains("seed")) cfg.kde.seed = get_as<uint64_t>(k["seed"], "kde.seed");
    if (k.contains("bandwidth_unit")) {
      const auto u = get_as<std::string>(k["bandwidth_unit"], "bandwidth_unit");
      if (u == "bins") {
        cfg.kde.unit = BandwidthUnit::kBins;
      } else if (u == "sd") {
        cfg.kde.unit = BandwidthUnit::kSdMultiple;
      } else {
        fail("bandwidth_unit must be 'bins' or 'sd'");
      }
    }
  }
  if (doc.contains("support")) cfg.support = support_from(doc["support"], "support");
  if (doc.contains("components")) {
    cfg.components.clear();
    if (!doc["components"].is_array()) fail("components must be an array");
    for (const json& c : doc["components"]) {
      check_keys(c, {"mu", "sigma2"}, "component");
      if (!c.contains("mu") || !c.contains("sigma2")) {
        fail("component needs mu and sigma2");
      }
      cfg.components.push_back({get_as<double>(c["mu"], "mu"),
                                get_as<double>(c["sigma2"], "sigma2")});
    }
  }
  if (doc.contains("chain_lengths")) {
    cfg.chain_lengths = get_as<std::vector<int>>(doc["chain_lengths"], "chain_lengths");
  }
  if (doc.contains("spacing")) cfg.spacing = get_as<double>(doc["spacing"], "spacing");
  if (doc.contains("sigma2")) cfg.sigma2 = get_as<double>(doc["sigma2"], "sigma2");
  if (doc.contains("input_path")) {
    cfg.input_path = get_as<std::string>(doc["input_path"], "input_path");
  }
  if (doc.contains("instances")) {
    const json& v = doc["instances"];
    // Inline array, or the path of a JSON file holding one.
    cfg.instances = v.is_string()
                        ? parse_instance_specs(read_text_file(v.get<std::string>()))
                        : instances_from(v);
  }
  if (doc.contains("out_dir")) cfg.out_dir = get_as<std::string>(doc["out_dir"], "out_dir");
  if (doc.contains("workers")) cfg.workers = get_as<int>(doc["workers"], "workers");
  if (doc.contains("record_wallclock")) {
    cfg.record_wallclock = get_as<bool>(doc["record_wallclock"], "record_wallclock");
  }
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["mode"] = std::string(mode_name(cfg.mode));
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(method_name(m)));
  doc["methods"] = methods;
  doc["n_grid"] = cfg.n_grid;
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["solver"] = {{"time_limit_s", cfg.solver.time_limit_s},
                   {"gap_tol", cfg.solver.gap_tol},
                   {"node_limit", cfg.solver.node_limit},
                   {"mode_bound", cfg.solver.mode_bound}};
  doc["kde"] = {{"bandwidth_grid", cfg.kde.bandwidth_grid},
                {"folds", cfg.kde.folds},
                {"seed", cfg.kde.seed},
                {"bandwidth_unit",
                 cfg.kde.unit == BandwidthUnit::kBins ? "bins" : "sd"}};
  doc["support"] = {cfg.support.l(), cfg.support.u()};
  json comps = json::array();
  for (const NormalComponent& c : cfg.components) {
    comps.push_back({{"mu", c.mu}, {"sigma2", c.sigma2}});
  }
  doc["components"] = comps;
  doc["chain_lengths"] = cfg.chain_lengths;
  doc["spacing"] = cfg.spacing;
  doc["sigma2"] = cfg.sigma2;
  doc["input_path"] = cfg.input_path;
  json insts = json::array();
  for (const InstanceSpec& s : cfg.instances) {
    insts.push_back({{"name", s.name},
                     {"series", s.series_chain},
                     {"support", {s.support.l(), s.support.u()}},
                     {"min_records", s.min_records}});
  }
  doc["instances"] = insts;
  doc["out_dir"] = cfg.out_dir;
  doc["workers"] = cfg.workers;
  doc["record_wallclock"] = cfg.record_wallclock;
  return doc.dump(2) + "\n";
}

}  // namespace ordest
