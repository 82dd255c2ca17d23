// rcap: desk-scale toolkit for fractional routing capacity regions.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcap/elimination.hpp"
#include "rcap/feasibility.hpp"
#include "rcap/fm.hpp"
#include "rcap/japanese.hpp"
#include "rcap/network.hpp"
#include "rcap/ring.hpp"

namespace {

using namespace rcap;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const nlohmann::json& doc, const std::string& out_path) {
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write file: " + out_path);
    out << text;
  }
}

Instance load_instance(const std::string& network_path) {
  auto [net, sessions] = load_network(slurp(network_path));
  return Instance::build(std::move(net), std::move(sessions));
}

DistanceFunction parse_distance(const std::string& csv, int edges) {
  DistanceFunction f;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rational v = parse_rational(item);
    if (denominator(v) != 1 || v < 0)
      throw input_error("distance entries must be nonnegative integers");
    f.values.push_back(numerator(v));
  }
  if (f.edge_count() != edges)
    throw input_error("expected " + std::to_string(edges) +
                      " distance entries, got " + std::to_string(f.edge_count()));
  return f;
}

nlohmann::json certificate_json(const Instance& inst,
                                const std::vector<Rational>& cert) {
  // row order in the feasibility LP: session equalities, then edge capacities
  nlohmann::json rows = nlohmann::json::array();
  size_t k = 0;
  for (const Session& s : inst.sessions)
    rows.push_back(nlohmann::json{{"row", "rate[" + s.id + "]"},
                                  {"multiplier", format_rational(cert[k++])}});
  for (const Edge& e : inst.net.edges)
    rows.push_back(nlohmann::json{{"row", "capacity[" + std::to_string(e.id) + "]"},
                                  {"multiplier", format_rational(cert[k++])}});
  return rows;
}

int run(int argc, char** argv) {
  CLI::App app{"fractional routing capacity region toolkit"};
  app.require_subcommand(1);

  std::string network_path, rates_path, out_path;
  std::string distance_csv, f_csv, g_csv, cycle_csv;
  int max_distance = 1;
  bool with_oracle = false;
  uint64_t cap = kDefaultEnumerationCap;
  int edges = 0, m_param = 6, trials = 100;
  std::string gmax_text;
  uint64_t seed = 1;

  auto* sub_subtrees = app.add_subcommand("subtrees", "list minimal subtrees per session");
  sub_subtrees->add_option("--network", network_path)->required();
  sub_subtrees->add_option("--out", out_path);

  auto* sub_ineq = app.add_subcommand("ineq", "Japanese inequality of a distance function");
  sub_ineq->add_option("--network", network_path)->required();
  sub_ineq->add_option("--distance", distance_csv)->required();
  sub_ineq->add_option("--out", out_path);

  auto* sub_feasible = app.add_subcommand("feasible", "rate-tuple feasibility with witness or certificate");
  sub_feasible->add_option("--network", network_path)->required();
  sub_feasible->add_option("--rates", rates_path)->required();
  sub_feasible->add_option("--out", out_path);

  auto* sub_boundary = app.add_subcommand("boundary", "hyperplane membership and boundary conditions");
  sub_boundary->add_option("--network", network_path)->required();
  sub_boundary->add_option("--rates", rates_path)->required();
  sub_boundary->add_option("--distance", distance_csv)->required();
  sub_boundary->add_option("--out", out_path);

  auto* sub_eliminate = app.add_subcommand("eliminate", "does f's inequality make g's redundant?");
  sub_eliminate->add_option("--network", network_path)->required();
  sub_eliminate->add_option("--f", f_csv)->required();
  sub_eliminate->add_option("--g", g_csv)->required();
  sub_eliminate->add_option("--out", out_path);

  auto* sub_describe = app.add_subcommand("describe", "minimal description over bounded distance functions");
  sub_describe->add_option("--network", network_path)->required();
  sub_describe->add_option("--max-distance", max_distance)->required();
  sub_describe->add_flag("--oracle", with_oracle, "compare against the Fourier-Motzkin oracle");
  sub_describe->add_option("--cap", cap);
  sub_describe->add_option("--out", out_path);

  auto* sub_oracle = app.add_subcommand("oracle", "exact capacity region by Fourier-Motzkin projection");
  sub_oracle->add_option("--network", network_path)->required();
  sub_oracle->add_option("--cap", cap);
  sub_oracle->add_option("--out", out_path);

  auto* sub_ring = app.add_subcommand("ring", "undirected ring constructions and experiments");
  sub_ring->require_subcommand(1);
  auto* ring_g4 = sub_ring->add_subcommand("g4", "the exponential distance function of the ring lower bound");
  ring_g4->add_option("--edges", edges)->required();
  ring_g4->add_option("--out", out_path);
  auto* ring_verify4 = sub_ring->add_subcommand("verify4", "exhaustive search for eliminators below the cap");
  ring_verify4->add_option("--edges", edges)->required();
  ring_verify4->add_option("--max-distance", max_distance)->required();
  ring_verify4->add_option("--cap", cap);
  ring_verify4->add_option("--out", out_path);
  auto* ring_embed = sub_ring->add_subcommand("embed5", "extend the ring construction along a maximum cycle");
  ring_embed->add_option("--network", network_path)->required();
  ring_embed->add_option("--cycle", cycle_csv, "comma-separated edge ids along the cycle")->required();
  ring_embed->add_option("--out", out_path);
  auto* ring_thm7 = sub_ring->add_subcommand("thm7", "randomized rounding experiment");
  ring_thm7->add_option("--edges", edges)->required();
  ring_thm7->add_option("--m", m_param);
  ring_thm7->add_option("--gmax", gmax_text)->required();
  ring_thm7->add_option("--trials", trials);
  ring_thm7->add_option("--seed", seed);
  ring_thm7->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  if (sub_subtrees->parsed()) {
    Instance inst = load_instance(network_path);
    nlohmann::json sessions = nlohmann::json::array();
    for (size_t i = 0; i < inst.sessions.size(); ++i) {
      nlohmann::json trees = nlohmann::json::array();
      for (const Subtree& t : inst.trees.per_session[i]) trees.push_back(t.edge_ids);
      sessions.push_back(nlohmann::json{{"session_id", inst.sessions[i].id},
                                        {"t", inst.trees.per_session[i].size()},
                                        {"subtrees", trees}});
    }
    emit(nlohmann::json{{"sessions", sessions}}, out_path);
  } else if (sub_ineq->parsed()) {
    Instance inst = load_instance(network_path);
    DistanceFunction f = parse_distance(distance_csv, inst.net.edge_count());
    emit(inequality_to_json(make_inequality(inst, f)), out_path);
  } else if (sub_feasible->parsed()) {
    Instance inst = load_instance(network_path);
    RateTuple r = load_rates(inst, slurp(rates_path));
    FeasibilityResult res = is_feasible(inst, r);
    nlohmann::json doc{{"feasible", res.feasible}};
    if (res.feasible)
      doc["witness"] = witness_to_json(inst, *res.witness);
    else
      doc["certificate"] = certificate_json(inst, res.certificate);
    emit(doc, out_path);
  } else if (sub_boundary->parsed()) {
    Instance inst = load_instance(network_path);
    RateTuple r = load_rates(inst, slurp(rates_path));
    DistanceFunction f = parse_distance(distance_csv, inst.net.edge_count());
    if (!is_feasible(inst, r).feasible)
      throw input_error("boundary analysis requires a feasible rate tuple");
    bool on = on_hyperplane(inst, r, f, /*assume_feasible=*/true);
    BoundaryResult bc = boundary_conditions(inst, r, f, /*assume_feasible=*/true);
    nlohmann::json doc{{"on_hyperplane", on}, {"boundary_conditions", bc.satisfied}};
    if (bc.witness) doc["witness"] = witness_to_json(inst, *bc.witness);
    emit(doc, out_path);
  } else if (sub_eliminate->parsed()) {
    Instance inst = load_instance(network_path);
    DistanceFunction f = parse_distance(f_csv, inst.net.edge_count());
    DistanceFunction g = parse_distance(g_csv, inst.net.edge_count());
    emit(nlohmann::json{{"eliminates", eliminates(inst, f, g)}}, out_path);
  } else if (sub_describe->parsed()) {
    Instance inst = load_instance(network_path);
    Description desc = minimal_description(inst, Int(max_distance), cap);
    nlohmann::json doc = description_to_json(desc);
    if (with_oracle) {
      ProjectedRegion region = region_from_network(inst, FmOptions{cap, true});
      std::vector<Inequality> survivors;
      for (const auto& e : desc.inequalities) survivors.push_back(e.normalized);
      doc["oracle_equal"] = regions_equal(region, survivors);
    }
    emit(doc, out_path);
  } else if (sub_oracle->parsed()) {
    Instance inst = load_instance(network_path);
    emit(region_to_json(region_from_network(inst, FmOptions{cap, true})), out_path);
  } else if (ring_g4->parsed()) {
    DistanceFunction g = theorem4_g(edges);
    nlohmann::json values = nlohmann::json::array();
    for (const Int& v : g.values) values.push_back(format_int(v));
    emit(nlohmann::json{{"edges", edges},
                        {"beta", format_int(theorem4_beta(edges))},
                        {"g", values},
                        {"forced_relations", verify_forced_relations(g, edges)}},
         out_path);
  } else if (ring_verify4->parsed()) {
    Theorem4Result res = verify_theorem4(edges, Int(max_distance), cap);
    auto dump = [](const std::vector<DistanceFunction>& fs) {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& f : fs) {
        nlohmann::json v = nlohmann::json::array();
        for (const Int& x : f.values) v.push_back(format_int(x));
        out.push_back(v);
      }
      return out;
    };
    emit(nlohmann::json{{"edges", edges},
                        {"f_cap", max_distance},
                        {"no_new_eliminator", res.ok},
                        {"nontrivial_candidates", res.candidates},
                        {"proportional_eliminators", dump(res.proportional_eliminators)},
                        {"other_eliminators", dump(res.other_eliminators)}},
         out_path);
  } else if (ring_embed->parsed()) {
    auto [net, sessions] = load_network(slurp(network_path));
    std::vector<int> cycle;
    std::stringstream ss(cycle_csv);
    std::string item;
    while (std::getline(ss, item, ',')) cycle.push_back(std::stoi(item));
    DistanceFunction f = corollary5_embed(net, cycle);
    nlohmann::json values = nlohmann::json::array();
    for (const Int& v : f.values) values.push_back(format_int(v));
    emit(nlohmann::json{{"distance", values}}, out_path);
  } else if (ring_thm7->parsed()) {
    RingSpec spec{edges, SessionPolicy::AllMulticast};
    RoundingParams params;
    params.m = m_param;
    Rational gmax = parse_rational(gmax_text);
    if (denominator(gmax) != 1 || gmax < 1)
      throw input_error("--gmax must be a positive integer");
    params.g_max = numerator(gmax);
    params.trials = trials;
    params.seed = seed;
    emit(theorem7_report_to_json(theorem7_experiment(spec, params)), out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rcap::resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const rcap::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
