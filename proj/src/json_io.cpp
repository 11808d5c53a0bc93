#include "posethdx/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "posethdx/errors.hpp"

namespace posethdx {

using nlohmann::json;

json poset_to_json(const GradedPoset& poset, const WeightScheme& weights) {
  json j;
  j["d"] = poset.top_rank();
  json elements = json::array();
  for (ElementId e = 0; e < poset.size(); ++e) {
    elements.push_back({{"id", e}, {"rank", poset.rank(e)}, {"label", poset.label(e)}});
  }
  j["elements"] = std::move(elements);
  json covers = json::array();
  for (ElementId y = 0; y < poset.size(); ++y)
    for (ElementId x : poset.children(y)) covers.push_back({x, y});
  j["covers"] = std::move(covers);
  if (!is_standard_scheme(poset, weights)) {
    json p = json::object();
    for (ElementId y = 0; y < poset.size(); ++y) {
      const auto& ch = poset.children(y);
      for (size_t i = 0; i < ch.size(); ++i)
        p[std::to_string(ch[i]) + "," + std::to_string(y)] = weights.p[y][i];
    }
    j["p"] = std::move(p);
  }
  json m_top = json::object();
  for (ElementId e : poset.level(poset.top_rank())) m_top[std::to_string(e)] = weights.m[e];
  j["m_top"] = std::move(m_top);
  return j;
}

PosetBundle poset_from_json(const json& j) {
  if (!j.contains("elements") || !j.contains("covers"))
    fail(ErrorCode::Parse, "poset file needs \"elements\" and \"covers\"");

  std::vector<long long> ext_ids;
  std::vector<int> ranks;
  std::vector<std::string> labels;
  std::map<long long, int> index_of;
  for (const auto& el : j.at("elements")) {
    const long long id = el.at("id").get<long long>();
    if (!index_of.emplace(id, static_cast<int>(ext_ids.size())).second)
      fail(ErrorCode::Parse, "duplicate element id " + std::to_string(id));
    ext_ids.push_back(id);
    ranks.push_back(el.at("rank").get<int>());
    labels.push_back(el.value("label", std::to_string(id)));
  }
  std::vector<std::pair<int, int>> covers;
  for (const auto& cv : j.at("covers")) {
    const long long child = cv.at(0).get<long long>();
    const long long parent = cv.at(1).get<long long>();
    const auto ci = index_of.find(child);
    const auto pi = index_of.find(parent);
    if (ci == index_of.end() || pi == index_of.end())
      fail(ErrorCode::Parse, "cover references an unknown element id");
    covers.emplace_back(ci->second, pi->second);
  }

  std::vector<int> remap;
  PosetBundle bundle;
  bundle.poset = make_graded_poset(std::move(ranks), std::move(labels), covers, &remap);
  const GradedPoset& poset = bundle.poset;

  const int d = poset.top_rank();
  std::vector<double> top_weights;
  if (j.contains("m_top")) {
    std::map<ElementId, double> given;
    for (const auto& [key, value] : j.at("m_top").items()) {
      const auto it = index_of.find(std::stoll(key));
      if (it == index_of.end()) fail(ErrorCode::Parse, "m_top references an unknown id " + key);
      given[remap[it->second]] = value.get<double>();
    }
    for (ElementId e : poset.level(d)) {
      const auto it = given.find(e);
      if (it == given.end())
        fail(ErrorCode::Parse, "m_top is missing maximal element " + poset.label(e));
      top_weights.push_back(it->second);
    }
  }

  if (!j.contains("p")) {
    bundle.weights = standard_weight_scheme(poset, std::move(top_weights));
    return bundle;
  }

  WeightScheme scheme;
  scheme.p.assign(poset.size(), {});
  for (ElementId y = 0; y < poset.size(); ++y)
    scheme.p[y].assign(poset.children(y).size(), -1.0);
  for (const auto& [key, value] : j.at("p").items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) fail(ErrorCode::Parse, "p keys look like \"child,parent\"");
    const auto ci = index_of.find(std::stoll(key.substr(0, comma)));
    const auto pi = index_of.find(std::stoll(key.substr(comma + 1)));
    if (ci == index_of.end() || pi == index_of.end())
      fail(ErrorCode::Parse, "p references an unknown element id");
    const ElementId child = remap[ci->second];
    const ElementId parent = remap[pi->second];
    const auto& ch = poset.children(parent);
    const auto it = std::lower_bound(ch.begin(), ch.end(), child);
    if (it == ch.end() || *it != child) fail(ErrorCode::Parse, "p entry " + key + " is not a cover");
    scheme.p[parent][it - ch.begin()] = value.get<double>();
  }
  for (ElementId y = 0; y < poset.size(); ++y)
    for (double v : scheme.p[y])
      if (v < 0.0) fail(ErrorCode::Parse, "p is missing a cover of " + poset.label(y));

  // Weights are determined by the top level and the transitions.
  scheme.m.assign(poset.size(), 0.0);
  if (top_weights.empty()) top_weights.assign(poset.level_size(d), 1.0);
  double total = 0.0;
  for (double w : top_weights) total += w;
  for (int i = 0; i < poset.level_size(d); ++i)
    scheme.m[poset.level(d)[i]] = top_weights[i] / total;
  for (ElementId e = poset.size() - 1; e >= 0; --e) {
    if (poset.rank(e) == d) continue;
    double acc = 0.0;
    for (ElementId y : poset.parents(e)) {
      const auto& ch = poset.children(y);
      const auto it = std::lower_bound(ch.begin(), ch.end(), e);
      acc += scheme.p[y][it - ch.begin()] * scheme.m[y];
    }
    scheme.m[e] = acc;
  }
  scheme.standard = is_standard_scheme(poset, scheme);
  bundle.weights = std::move(scheme);
  return bundle;
}

PosetBundle load_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, path + ": " + e.what());
  }
  return poset_from_json(j);
}

void save_poset_file(const std::string& path, const GradedPoset& poset,
                     const WeightScheme& weights) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << poset_to_json(poset, weights).dump(2) << "\n";
}

void write_matrix_dump(const std::string& path, const LinearOp& op, const GradedPoset& poset) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  char buf[32];
  for (int r = 0; r < op.mat.rows(); ++r) {
    for (int c = 0; c < op.mat.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", op.mat(r, c));
      out << (c ? " " : "") << buf;
    }
    out << "\n";
  }
  json index;
  index["source_level"] = op.source_level;
  index["target_level"] = op.target_level;
  json source = json::array();
  for (ElementId e : poset.level(op.source_level))
    source.push_back({{"id", e}, {"label", poset.label(e)}});
  json target = json::array();
  for (ElementId e : poset.level(op.target_level))
    target.push_back({{"id", e}, {"label", poset.label(e)}});
  index["source"] = std::move(source);
  index["target"] = std::move(target);
  std::ofstream idx(path + ".index.json");
  if (!idx) fail(ErrorCode::Io, "cannot write " + path + ".index.json");
  idx << index.dump(2) << "\n";
}

json to_json(const ValidationReport& report) {
  json rows = json::array();
  for (const auto& v : report.violations)
    rows.push_back({{"code", v.code}, {"message", v.message}, {"elements", v.elements}});
  return json{{"valid", report.valid()}, {"violations", std::move(rows)}};
}

json to_json(const SpectralSummary& summary) {
  return json{{"eigenvalues", summary.eigenvalues},
              {"lambda_max", summary.lambda_max},
              {"lambda_2", summary.lambda_2},
              {"lambda_min", summary.lambda_min},
              {"lambda", summary.lambda_of},
              {"self_adjointness_residual", summary.self_adjointness_residual}};
}

json to_json(const ConnectivityReport& report) {
  json rows = json::array();
  for (const auto& row : report.links)
    rows.push_back({{"link", row.label}, {"rank", row.rank}, {"connected", row.connected}});
  return json{{"connected", report.connected},
              {"locally_connected", report.locally_connected},
              {"links", std::move(rows)}};
}

json to_json(const ExpansionCertificate& cert) {
  json j;
  j["kind"] = cert.kind;
  json params;
  params["lambda"] = cert.lambda;
  if (cert.nu) params["nu"] = *cert.nu;
  j["params"] = std::move(params);
  if (!cert.rows.empty()) {
    json rows = json::array();
    for (const auto& row : cert.rows) {
      rows.push_back({{"link", row.link},
                      {"rank", row.rank},
                      {"lambda2", row.lambda2},
                      {"lambdamin", row.lambda_min},
                      {"connected", row.connected},
                      {"pass", row.pass}});
    }
    j["rows"] = std::move(rows);
  }
  if (!cert.eposet_rows.empty()) {
    json rows = json::array();
    for (const auto& row : cert.eposet_rows) {
      rows.push_back({{"j", row.j},
                      {"r", row.r},
                      {"delta", row.delta},
                      {"residual_norm", row.residual_norm},
                      {"from_regularity", row.from_regularity},
                      {"fitted_r", row.fitted_r},
                      {"fitted_delta", row.fitted_delta},
                      {"fitted_residual_norm", row.fitted_residual_norm},
                      {"pass", row.pass}});
    }
    j["rows"] = std::move(rows);
  }
  j["verdict"] = cert.verdict;
  return j;
}

namespace {

json to_json(const CountStat& stat) {
  json j;
  j["configurations"] = stat.configs;
  j["uniform"] = stat.uniform();
  if (stat.uniform()) {
    j["value"] = stat.lo;
  } else if (stat.configs > 0) {
    j["min"] = stat.lo;
    j["max"] = stat.hi;
  }
  return j;
}

json to_json(const IntervalConstant& c) {
  return json{{"configurations", c.configs}, {"value", c.value()}, {"deviation", c.deviation()}};
}

}  // namespace

json to_json(const RegularityReport& report) {
  json j;
  j["d"] = report.d;
  json lower = json::array();
  for (const auto& s : report.lower) lower.push_back(to_json(s));
  json middle = json::array();
  for (const auto& s : report.middle) middle.push_back(to_json(s));
  json wedge = json::array();
  for (const auto& s : report.wedge) wedge.push_back(to_json(s));
  j["lower"] = std::move(lower);
  j["middle"] = std::move(middle);
  j["wedge"] = std::move(wedge);
  j["wye"] = to_json(report.wye);
  j["lower_regular"] = report.lower_regular;
  j["middle_regular"] = report.middle_regular;
  j["wedge_regular"] = report.wedge_regular;
  j["wye_regular"] = report.wye_regular;
  j["regular"] = report.regular;
  j["two_skeleton_regular"] = report.two_skeleton_regular;
  json local = json::array();
  for (const auto& row : report.local) {
    local.push_back({{"level", row.level},
                     {"lower1", to_json(row.lower1)},
                     {"lower2", to_json(row.lower2)},
                     {"middle1", to_json(row.middle1)},
                     {"wye", to_json(row.wye)}});
  }
  j["local"] = std::move(local);
  j["locally_two_skeleton_regular"] = report.locally_two_skeleton_regular;
  return j;
}

json to_json(const ULReport& report) {
  json j;
  j["d"] = report.d;
  json single = json::array(), pair = json::array(), square = json::array();
  for (const auto& c : report.single) single.push_back(to_json(c));
  for (const auto& c : report.pair) pair.push_back(to_json(c));
  for (const auto& c : report.square) square.push_back(to_json(c));
  j["c_single"] = std::move(single);
  j["c_pair"] = std::move(pair);
  j["c_square"] = std::move(square);
  j["exact"] = report.exact;
  return j;
}

json to_json(const ALReport& report) {
  return json{{"d", report.d},
              {"configurations", report.configs},
              {"max_relative_deviation", report.max_relative_deviation},
              {"worst", report.worst},
              {"exact", report.exact}};
}

json to_json(const TLReport& report) {
  return json{{"c_same", to_json(report.same)},
              {"c_diff", to_json(report.diff)},
              {"c_same2", to_json(report.same2)},
              {"c_diff2", to_json(report.diff2)},
              {"exact", report.exact}};
}

json to_json(const PredictedConstants& constants) {
  json j;
  j["c_single"] = constants.c_single;
  j["c_pair"] = constants.c_pair;
  j["c_square"] = constants.c_square;
  if (constants.c_same) {
    j["c_same"] = *constants.c_same;
    j["c_diff"] = *constants.c_diff;
    j["c_same2"] = *constants.c_same2;
    j["c_diff2"] = *constants.c_diff2;
  }
  return j;
}

json to_json(const BoundCheck& check) {
  return json{{"theorem", check.theorem},
              {"bound", check.bound},
              {"measured", check.measured},
              {"verdict", check.verdict},
              {"details", check.details}};
}

json to_json(const ResidualReport& report) {
  return json{{"identity", report.identity}, {"trials", report.trials},
              {"seed", report.seed},         {"max_residual", report.max_residual},
              {"tol", report.tol},           {"pass", report.pass()}};
}

json to_json(const BasicLocalizationReport& report) {
  return json{{"k", report.k},
              {"l", report.l},
              {"inner_product", to_json(report.inner_product)},
              {"down_operator", to_json(report.down_operator)}};
}

json to_json(const UpLocalizationReport& report) {
  json j;
  j["level"] = report.level;
  j["approximate"] = report.approximate;
  j["eps"] = report.eps;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  if (report.approximate) {
    j["max_defect"] = report.max_defect;
    j["min_margin"] = report.min_margin;
  } else {
    j["max_residual"] = report.max_residual;
  }
  j["pass"] = report.pass;
  return j;
}

json to_json(const TricklingLocalizationReport& report) {
  return json{{"mean_identity", to_json(report.mean_identity)},
              {"norm_identity", to_json(report.norm_identity)},
              {"adjacency_identity", to_json(report.adjacency_identity)}};
}

json to_json(const WalkIdentityReport& report) {
  return json{{"projection_residual", report.projection_residual},
              {"spectra_match", report.spectra_match},
              {"adjacency_affine", report.adjacency_affine},
              {"pass", report.pass}};
}

json to_json(const TricklingBound& bound) {
  json rows = json::array();
  for (const auto& row : bound.rows) {
    rows.push_back({{"level", row.level},
                    {"C", row.c},
                    {"B", row.b},
                    {"lo", row.lo},
                    {"hi", row.hi},
                    {"measured_lo", row.measured_lo},
                    {"measured_hi", row.measured_hi},
                    {"fixed_points", {row.fixed_point_lo, row.fixed_point_hi}},
                    {"pass", row.pass}});
  }
  return json{{"constants_source", bound.constants_source},
              {"base", {bound.base_lo, bound.base_hi}},
              {"levels", std::move(rows)},
              {"verdict", bound.verdict}};
}

json to_json(const EposetDecomposition& dec) {
  json gram = json::array();
  for (int r = 0; r < dec.gram.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < dec.gram.cols(); ++c) row.push_back(dec.gram(r, c));
    gram.push_back(std::move(row));
  }
  return json{{"l", dec.l},
              {"r_constants", dec.r_constants},
              {"delta_constants", dec.delta_constants},
              {"r_table", dec.r_table},
              {"component_norms_sq", dec.component_norm_sq},
              {"reconstruction_residual", dec.reconstruction_residual},
              {"norm_sum_defect", dec.norm_sum_defect},
              {"gram", std::move(gram)},
              {"eigen_residuals", dec.eigen_residuals},
              {"eigen_targets", dec.eigen_targets},
              {"min_singular_values", dec.min_singular_values}};
}

json to_json(const PosetificationCertificate& cert) {
  json rows = json::array();
  for (const auto& row : cert.top_links) {
    rows.push_back({{"link", row.label},
                    {"kind", row.kind},
                    {"p", row.p},
                    {"max_oracle_diff", row.max_oracle_diff},
                    {"pass", row.pass}});
  }
  return json{{"q", cert.q},
              {"thickness", cert.thickness},
              {"max_up_degree", cert.max_up_degree},
              {"top_links", std::move(rows)},
              {"lambda2_max", cert.lambda2_max},
              {"lambda_min_min", cert.lambda_min_min},
              {"slack", cert.slack},
              {"min_bound_ok", cert.min_bound_ok},
              {"two_sided", to_json(cert.two_sided)},
              {"verdict", cert.verdict}};
}

}  // namespace posethdx
