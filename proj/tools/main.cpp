#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "ubq/cantor.hpp"
#include "ubq/content.hpp"
#include "ubq/covering.hpp"
#include "ubq/error.hpp"
#include "ubq/formulas.hpp"
#include "ubq/limsup.hpp"
#include "ubq/region_set.hpp"

using json = nlohmann::ordered_json;
using ubq::app::format_number;

namespace {

unsigned env_threads() {
  const char* v = std::getenv("UBQ_THREADS");
  if (!v) return 0;
  const long n = std::strtol(v, nullptr, 10);
  return n > 0 ? static_cast<unsigned>(n) : 0;
}

std::vector<double> numbers(const std::string& s) { return s.empty() ? std::vector<double>{} : ubq::parse_number_list(s); }

void print_kv(bool as_json, const json& j) {
  if (as_json) {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

json bound_json(const ubq::BoundResult& b) {
  json j;
  j["formula"] = ubq::to_string(b.formula_id);
  for (const auto& [k, v] : b.inputs) j["inputs"][k] = v;
  j["value"] = b.value;
  j["equality_claimed"] = b.equality_claimed;
  if (b.formula_id == ubq::FormulaId::kMahler) j["saturated"] = b.saturated;
  return j;
}

ubq::RegionSet content_region(int cantor, const std::string& center, double radius, const std::string& tau, int base,
                              int level) {
  if (cantor >= 0) return ubq::cantor_set(cantor);
  const auto c = numbers(center);
  if (c.empty()) throw ubq::Error(ubq::ErrorCode::kInvalidArgument, "give --cantor or --center with --radius");
  if (!tau.empty()) return ubq::region_cover(ubq::AnisoRect{c, radius, numbers(tau)}, base, level);
  return ubq::region_cover(ubq::Ball{c, radius}, base, level);
}

ubq::BallFamily rational_or_targets(const std::string& gen, std::int64_t q_lo, std::int64_t q_hi, double delta, int depth) {
  if (gen == "rational") return ubq::rational_window(q_lo, q_hi, delta);
  if (gen == "targets") return ubq::shrinking_targets(ubq::IFS::middle_third(), ubq::Point{0.0}, delta, depth);
  throw ubq::Error(ubq::ErrorCode::kInvalidArgument, "unknown generator '" + gen + "'");
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw ubq::Error(ubq::ErrorCode::kIo, "cannot write '" + path + "'");
  return file;
}

json tree_json(const ubq::CantorTree& tree) {
  json j;
  j["q4"] = tree.q4;
  j["q1"] = tree.q1;
  j["conservation_error"] = tree.conservation_error();
  for (const auto& g : tree.generations) {
    j["generations"].push_back({{"sets", g.sets},
                                {"intermediates", g.intermediates},
                                {"min_diameter", g.min_diameter},
                                {"min_select_ratio", g.min_select_ratio},
                                {"majornani_violations", g.majornani_violations},
                                {"coupling_violations", g.coupling_violations}});
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    json node;
    node["id"] = i;
    node["kind"] = n.kind == ubq::GenerationNode::Kind::kRoot ? "root" : n.kind == ubq::GenerationNode::Kind::kSet ? "set" : "intermediate";
    node["generation"] = n.generation;
    node["parent"] = n.parent;
    if (n.kind == ubq::GenerationNode::Kind::kSet) node["index"] = n.seq_index;
    node["center"] = n.ball.center;
    node["radius"] = n.ball.radius;
    node["eta"] = n.eta;
    node["children"] = n.children;
    j["nodes"].push_back(std::move(node));
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension bounds, contents and limsup-set experiments"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  // dim
  auto* dim = app.add_subcommand("dim", "Closed-form dimension bounds");
  std::optional<double> dim_mu;
  double delta = 1.0;
  std::string tau, ratios;
  std::size_t d = 1;
  dim->add_option("--dim-mu", dim_mu, "Dimension of the measure");
  dim->add_option("--delta", delta, "Shrinking exponent")->capture_default_str();
  dim->add_option("--tau", tau, "Rectangle exponents, comma separated");
  dim->add_option("--ratios", ratios, "IFS contraction ratios, comma separated (p/q allowed)");
  dim->add_option("--d", d, "Ambient dimension")->capture_default_str();

  // content
  auto* content = app.add_subcommand("content", "Hausdorff content of a b-adic region");
  int cantor_depth = -1, base = 2, level = 12;
  double s = 1.0, radius = 0.0;
  std::string center, rect_tau;
  bool witness = false;
  content->add_option("--cantor", cantor_depth, "Triadic Cantor generation K_k (base 3)");
  content->add_option("--center", center, "Ball or rectangle center");
  content->add_option("--radius", radius, "Ball or rectangle radius");
  content->add_option("--tau", rect_tau, "Rectangle exponents");
  content->add_option("--s", s, "Exponent")->capture_default_str();
  content->add_option("--base", base, "Grid base")->capture_default_str();
  content->add_option("--level", level, "Finest level")->capture_default_str();
  content->add_flag("--witness", witness, "Report the optimal cover size");

  // cover
  auto* cover = app.add_subcommand("cover", "Besicovitch families of a rational-ball family");
  std::int64_t q_lo = 1, q_hi = 32;
  double v = 1.0;
  cover->add_option("--q-lo", q_lo)->capture_default_str();
  cover->add_option("--q-hi", q_hi)->capture_default_str();
  cover->add_option("--delta", delta)->capture_default_str();
  cover->add_option("--v", v, "Dilates 1/v are disjoint within a family")->capture_default_str();

  // muac
  auto* muac = app.add_subcommand("muac", "Asymptotic-covering probe for Lebesgue measure");
  double C = 0.5;
  int omega_level = 3;
  muac->add_option("--q-lo", q_lo)->capture_default_str();
  muac->add_option("--q-hi", q_hi)->capture_default_str();
  muac->add_option("--delta", delta)->capture_default_str();
  muac->add_option("--C", C)->capture_default_str();
  muac->add_option("--omega-level", omega_level, "Omega ranges over the dyadic intervals of this level")->capture_default_str();

  // limsup
  auto* limsup = app.add_subcommand("limsup", "Finite limsup stages");
  limsup->require_subcommand(1);
  std::string generator = "rational", out_path;
  int depth = 8, lvl_lo = 4, lvl_hi = 10;
  std::int64_t q_max = 50;
  auto* lbuild = limsup->add_subcommand("build", "Emit a stage as JSON lines");
  auto* lcount = limsup->add_subcommand("boxcount", "Box-counting dimension of a stage");
  for (auto* sc : {lbuild, lcount}) {
    sc->add_option("--generator", generator, "rational | targets | mahler")->capture_default_str();
    sc->add_option("--q-lo", q_lo)->capture_default_str();
    sc->add_option("--q-hi", q_hi)->capture_default_str();
    sc->add_option("--q-max", q_max, "Mahler q range")->capture_default_str();
    sc->add_option("--delta", delta)->capture_default_str();
    sc->add_option("--depth", depth, "Word length for shrinking targets")->capture_default_str();
    sc->add_option("--out", out_path, "Output file (default stdout)");
  }
  lcount->add_option("--base", base)->capture_default_str();
  lcount->add_option("--level-lo", lvl_lo)->capture_default_str();
  lcount->add_option("--level-hi", lvl_hi)->capture_default_str();

  // cantor
  auto* cantor = app.add_subcommand("cantor", "Finite-depth Cantor construction");
  cantor->require_subcommand(1);
  std::string config_path;
  std::optional<int> gen_depth;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 10000;
  auto* cbuild = cantor->add_subcommand("build", "Build and print the tree as JSON");
  auto* cverify = cantor->add_subcommand("verify", "Build, then sample eta(A) / zeta(|A|)");
  for (auto* sc : {cbuild, cverify}) {
    sc->add_option("--config", config_path, "Key-value config with a [params] section");
    sc->add_option("--depth", gen_depth, "Generations P");
    sc->add_option("--seed", seed, "Seed");
    sc->add_option("--out", out_path, "Output file (default stdout)");
  }
  cverify->add_option("--samples", samples)->capture_default_str();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment");
  std::string out_dir = "out";
  experiment->add_option("--config", config_path, "Experiment config")->required();
  experiment->add_option("--out-dir", out_dir, "Artifact directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (dim->parsed()) {
      std::vector<ubq::BoundResult> rows;
      if (dim_mu) rows.push_back(ubq::shrunk_ball_bound(*dim_mu, delta));
      if (dim_mu && !tau.empty()) rows.push_back(ubq::rect_bound(*dim_mu, numbers(tau)));
      if (!ratios.empty()) rows.push_back(ubq::target_bound(numbers(ratios), delta, d));
      rows.push_back(ubq::mahler_bound(delta));
      rows.push_back(ubq::jarnik_bound(delta));
      for (const auto& b : rows) {
        if (as_json) {
          std::cout << bound_json(b).dump() << "\n";
          continue;
        }
        std::string inputs;
        for (const auto& [k, x] : b.inputs) inputs += (inputs.empty() ? "" : " ") + k + "=" + format_number(x);
        std::cout << ubq::to_string(b.formula_id) << "\t" << inputs << "\t" << format_number(b.value) << "\t"
                  << (b.equality_claimed ? "equality" : "lower bound") << (b.saturated ? " (saturated)" : "") << "\n";
      }
      return 0;
    }

    if (content->parsed()) {
      const auto region = content_region(cantor_depth, center, radius, rect_tau, cantor_depth >= 0 ? 3 : base, level);
      const auto est = ubq::content_estimate(region, s, std::max(level, region.max_level()), witness);
      json j{{"s", s}, {"lower", est.lower}, {"upper", est.upper}, {"cubes", region.cubes.size()}};
      if (witness) j["witness_count"] = est.witness_count;
      print_kv(as_json, j);
      return 0;
    }

    if (cover->parsed()) {
      const auto fam = ubq::rational_window(q_lo, q_hi, delta);
      const auto families = ubq::besicovitch_families(fam, v);
      const auto chk = ubq::verify_besicovitch(fam, families, v);
      print_kv(as_json, json{{"balls", fam.size()}, {"families", families.size()}, {"centers_covered", chk.centers_covered},
                             {"dilates_disjoint", chk.dilates_disjoint}});
      return chk.ok() ? 0 : 1;
    }

    if (muac->parsed()) {
      const auto mu = ubq::CylinderMeasure::lebesgue(1, 2, 50);
      const auto fam = ubq::rational_window(q_lo, q_hi, delta);
      std::vector<ubq::RegionSet> omegas;
      for (std::int64_t k = 0; k < ubq::ipow_int(2, omega_level); ++k) {
        omegas.push_back(ubq::RegionSet{2, 1, {ubq::BadicCube{2, omega_level, {k}}}});
      }
      const auto rep = ubq::mu_ac_check(fam, mu, omegas, {fam.indices.front()}, C);
      print_kv(as_json, json{{"probes", rep.probes.size()}, {"min_ratio", rep.min_ratio}, {"C", rep.C}, {"pass", rep.pass}});
      return rep.pass ? 0 : 1;
    }

    if (lbuild->parsed()) {
      std::ofstream file;
      std::ostream& out = output(out_path, file);
      if (generator == "mahler") {
        const auto st = ubq::mahler_targets(q_max, delta);
        for (const auto& t : st.targets) {
          json j{{"p", t.p}, {"q", t.q}, {"n_q", t.n_q}, {"T", t.T.coords[0]}, {"N", t.N}, {"emitted", t.emitted},
                 {"truncated", t.truncated}, {"cells", t.region.cubes.size()}};
          out << j.dump() << "\n";
        }
        for (const auto& [p, q] : st.skipped) std::cerr << "skipped p=" << p << " q=" << q << ": no triadic interval fits\n";
        return 0;
      }
      const auto fam = rational_or_targets(generator, q_lo, q_hi, delta, depth);
      for (std::size_t i = 0; i < fam.size(); ++i) {
        out << json{{"index", fam.indices[i]}, {"center", fam.balls[i].center}, {"radius", fam.balls[i].radius}}.dump() << "\n";
      }
      return 0;
    }

    if (lcount->parsed()) {
      std::vector<ubq::Box> boxes;
      if (generator == "mahler") {
        for (const auto& t : ubq::mahler_targets(q_max, delta).targets) {
          for (const auto& c : t.region.cubes) boxes.push_back(c.box());
        }
      } else {
        for (const auto& b : rational_or_targets(generator, q_lo, q_hi, delta, depth).balls) boxes.push_back(b.box());
      }
      const auto bc = ubq::boxcount_dimension(boxes, base, lvl_lo, lvl_hi);
      std::ofstream file;
      std::ostream& out = output(out_path, file);
      out << "level,N\n";
      for (std::size_t i = 0; i < bc.levels.size(); ++i) out << bc.levels[i] << "," << format_number(bc.counts[i]) << "\n";
      if (!out_path.empty() || as_json) print_kv(as_json, json{{"slope", bc.slope}, {"r2", bc.r2}});
      else std::cerr << "slope " << format_number(bc.slope) << " r2 " << format_number(bc.r2) << "\n";
      return 0;
    }

    if (cbuild->parsed() || cverify->parsed()) {
      ubq::Config cfg = config_path.empty() ? ubq::Config{} : ubq::Config::load(config_path);
      if (seed) cfg.set("experiment", "seed", std::to_string(*seed));
      if (gen_depth && !cfg.has("params", "eps")) {
        std::string eps;
        for (int p = 0; p < *gen_depth; ++p) eps += (p ? "," : "") + format_number(0.2 * std::pow(0.75, p));
        cfg.set("params", "eps", eps);
      }
      const auto mu = ubq::CylinderMeasure::lebesgue(1, 2, 50);
      const auto tree = ubq::app::cantor_from_config(cfg, mu);
      std::ofstream file;
      std::ostream& out = output(out_path, file);
      if (cbuild->parsed()) {
        out << tree_json(tree).dump() << "\n";
        return 0;
      }
      const auto rep = ubq::mass_check(tree, mu, samples, tree.params.seed, 0.05, env_threads());
      json j{{"samples", rep.samples}, {"max_ratio", rep.max_ratio}, {"violations", rep.violations},
             {"worst_center", rep.worst.center}, {"worst_radius", rep.worst.radius},
             {"conservation_error", rep.conservation_error}, {"pass", rep.pass()}};
      if (as_json || !out_path.empty()) out << j.dump() << "\n";
      else print_kv(false, j);
      return rep.pass() ? 0 : 1;
    }

    if (experiment->parsed()) {
      const auto cfg = ubq::Config::load(config_path);
      const auto result = ubq::app::run_experiment(cfg, env_threads());
      ubq::app::write_artifacts(result, out_dir);
      for (const auto& r : result.summary) {
        if (as_json) {
          std::cout << json{{"experiment", result.id}, {"quantity", r.quantity}, {"predicted", r.predicted},
                            {"measured", r.measured}, {"tolerance", r.tolerance}, {"pass", r.pass}}.dump()
                    << "\n";
        } else {
          std::cout << result.id << "\t" << r.quantity << "\tpredicted " << format_number(r.predicted) << "\tmeasured "
                    << format_number(r.measured) << "\ttolerance " << format_number(r.tolerance) << "\t"
                    << (r.pass ? "PASS" : "FAIL") << "\n";
        }
      }
      return result.pass() ? 0 : 1;
    }
  } catch (const ubq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
