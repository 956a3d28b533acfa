// phimap: build, verify and export the positive map Phi[a,b,c,d] and its dual face.
//
//   phimap params 2 2 2 1
//   phimap verify --seed 7 [--sweep 100]
//   phimap face --r 1 --grid 360x21 [-o scan.csv] | --intersect 1 2 | --mixed C1,L0
//   phimap state --circles 1,2 --points 5,5 --seed 7 [-o state.json]
//   phimap state --vertical 0.3,1.2 --points 4,5
//
// Exit codes: 0 all claims pass, 1 a claim fails, 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phimap/face_geometry.hpp"
#include "phimap/map.hpp"
#include "phimap/report.hpp"
#include "phimap/state_factory.hpp"
#include "phimap/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a flat JSON object whose keys are long option names of the chosen subcommand.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    const auto chosen = root_->get_subcommands();
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      if (!chosen.empty()) item.parents = {chosen.front()->get_name()};
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_structured()) throw CLI::ConversionError("config values must be scalars or lists");
    return v.dump();
  }

  const CLI::App* root_;
};

struct CommonOptions {
  double a = 2, b = 2, c = 2, d = 1;
  std::string profile;
  std::optional<double> rank_tol, psd_tol, residual_tol, hermitian_tol;
  std::string output;
};

void add_common(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--a", opt.a, "parameter a")->capture_default_str();
  sub->add_option("--b", opt.b, "parameter b")->capture_default_str();
  sub->add_option("--c", opt.c, "parameter c")->capture_default_str();
  sub->add_option("--d", opt.d, "parameter d")->capture_default_str();
  sub->add_option("--profile", opt.profile,
                  "tolerance profile: default, strict, loose (env PHIMAP_TOLERANCE_PROFILE)");
  sub->add_option("--rank-tol", opt.rank_tol, "relative singular-value cutoff for ranks");
  sub->add_option("--psd-tol", opt.psd_tol, "allowed negative eigenvalue, relative");
  sub->add_option("--residual-tol", opt.residual_tol, "residual and overlap tolerance");
  sub->add_option("--hermitian-tol", opt.hermitian_tol, "hermiticity tolerance");
  sub->add_option("-o,--output", opt.output, "write the main output here instead of stdout");
}

phimap::ToleranceConfig resolve_tolerances(const CommonOptions& opt) {
  std::string profile = opt.profile;
  if (profile.empty()) {
    const char* env = std::getenv("PHIMAP_TOLERANCE_PROFILE");
    profile = env != nullptr && *env != '\0' ? env : "default";
  }
  phimap::ToleranceConfig tol = phimap::tolerance_profile(profile);
  if (opt.rank_tol) tol.rank_rel_tol = *opt.rank_tol;
  if (opt.psd_tol) tol.psd_tol = *opt.psd_tol;
  if (opt.residual_tol) tol.residual_tol = *opt.residual_tol;
  if (opt.hermitian_tol) tol.hermitian_tol = *opt.hermitian_tol;
  tol.validate();
  return tol;
}

phimap::MapParams resolve_params(const CommonOptions& opt) {
  return phimap::derive_params(opt.a, opt.b, opt.c, opt.d);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  out << text;
}

std::string to_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_params(const std::vector<double>& abcd) {
  const phimap::MapParams p = phimap::derive_params(abcd[0], abcd[1], abcd[2], abcd[3]);
  std::cout << to_text(phimap::params_to_json(p));
  return kExitPass;
}

int cmd_verify(const CommonOptions& opt, std::optional<std::uint64_t> seed, int sweep) {
  if (!seed) throw UsageError("verify needs --seed");
  if (sweep < 0) throw UsageError("--sweep must be non-negative");
  const auto tol = resolve_tolerances(opt);
  phimap::SuiteResult res;
  if (sweep > 0) {
    res = phimap::run_verification(phimap::parameter_sweep(sweep, *seed),
                                   phimap::sweep_options(*seed), tol);
  } else {
    phimap::SuiteOptions so;
    so.seed = *seed;
    res = phimap::run_verification({resolve_params(opt)}, so, tol);
  }
  emit(opt.output, to_text(res.report));
  return res.passed ? kExitPass : kExitClaimFailure;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw UsageError("--grid must look like 360x21");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError("--grid must look like 360x21");
  }
}

phimap::CircleSpec parse_circle(const std::string& tag) {
  if (tag.size() < 2) throw UsageError("circle tags look like C1.5 or L0.7");
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(tag.substr(1), &used);
    if (used != tag.size() - 1) throw UsageError("bad circle tag " + tag);
  } catch (const std::logic_error&) {
    throw UsageError("bad circle tag " + tag);
  }
  // P is accepted as a synonym of C for horizontal circles.
  if (tag[0] == 'C' || tag[0] == 'P') return phimap::CircleSpec::horizontal(v);
  if (tag[0] == 'L') return phimap::CircleSpec::vertical(v);
  throw UsageError("circle tags start with C (horizontal) or L (vertical)");
}

int cmd_face(const CommonOptions& opt, const std::optional<double>& r, const std::string& grid,
             const std::vector<double>& intersect, const std::vector<std::string>& mixed) {
  const int modes = (r ? 1 : 0) + (intersect.empty() ? 0 : 1) + (mixed.empty() ? 0 : 1);
  if (modes != 1) throw UsageError("face needs exactly one of --r, --intersect, --mixed");
  const auto p = resolve_params(opt);
  const auto tol = resolve_tolerances(opt);

  if (r) {
    const auto [n_angles, n_radii] = parse_grid(grid);
    const auto scan = phimap::extreme_point_recovery(p, *r, phimap::beta_grid(*r, n_angles, n_radii), tol);
    std::ostringstream csv;
    phimap::write_scan_csv(csv, scan.rows);
    emit(opt.output, csv.str());
    // With the CSV on stdout the report goes to stderr.
    (opt.output.empty() ? std::cerr : std::cout) << to_text(scan.report.to_json());
    return scan.report.passed() ? kExitPass : kExitClaimFailure;
  }
  if (!intersect.empty()) {
    if (intersect.size() != 2) throw UsageError("--intersect takes two radii");
    const auto rep = phimap::intersection_pair(p, intersect[0], intersect[1], tol);
    emit(opt.output, to_text(rep.to_json()));
    return rep.passed() ? kExitPass : kExitClaimFailure;
  }
  if (mixed.size() != 2) throw UsageError("--mixed takes two circle tags");
  const auto A = parse_circle(mixed[0]);
  const auto B = parse_circle(mixed[1]);
  if (A.kind() == B.kind()) throw UsageError("--mixed needs one horizontal and one vertical circle");
  const auto& H = A.kind() == phimap::CircleSpec::Kind::Horizontal ? A : B;
  const auto& V = A.kind() == phimap::CircleSpec::Kind::Horizontal ? B : A;
  const auto [rank, rank_gamma] = phimap::mixed_family_ranks(p, H.radius(), V.angle(), tol);
  phimap::VerificationReport rep;
  rep.claim = "product vectors from circles of different families do not span";
  rep.params = phimap::params_to_json(p);
  rep.tolerances = tol;
  rep.details = {{"circles", {H.tag(), V.tag()}}, {"rank", rank}, {"rank_gamma", rank_gamma}};
  rep.samples_checked = 1;
  if (rank >= 8) rep.fail(nullptr, "the union spans C^8", rank);
  emit(opt.output, to_text(rep.to_json()));
  return rep.passed() ? kExitPass : kExitClaimFailure;
}

int cmd_state(const CommonOptions& opt, const std::vector<double>& circles,
              const std::vector<double>& vertical, const std::vector<int>& points,
              std::optional<std::uint64_t> seed) {
  if (circles.empty() == vertical.empty()) {
    throw UsageError("state needs exactly one of --circles, --vertical");
  }
  if (points.size() != 2) throw UsageError("--points takes two counts");
  const auto p = resolve_params(opt);
  const auto tol = resolve_tolerances(opt);
  phimap::StateRecipe recipe;
  if (!circles.empty()) {
    if (circles.size() != 2) throw UsageError("--circles takes two radii");
    if (!seed) throw UsageError("--circles needs --seed");
    recipe = phimap::two_circle_recipe(circles[0], circles[1], points[0], points[1], *seed);
  } else {
    if (vertical.size() != 2) throw UsageError("--vertical takes two angles");
    const auto take = [](const std::vector<double>& all, int k) {
      if (k < 1 || k > static_cast<int>(all.size())) {
        throw UsageError("vertical point counts must be between 1 and " + std::to_string(all.size()));
      }
      return std::vector<double>(all.begin(), all.begin() + k);
    };
    recipe = phimap::vertical_recipe(vertical[0], vertical[1], take(phimap::kVerticalRadii, points[0]),
                                     take(phimap::kVerticalRadii2, points[1]));
  }
  const auto state = phimap::build_state(p, recipe, tol);
  const auto rep = phimap::certify_boundary_full_rank(state, p, tol);
  nlohmann::json out = state.to_json();
  out["verification"] = rep.to_json();
  emit(opt.output, to_text(out));
  return rep.passed() ? kExitPass : kExitClaimFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive map Phi[a,b,c,d]: M_2 -> M_4, its certificates and dual-face geometry"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file whose keys mirror the long flags of the subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::vector<double> abcd;
  auto* params = app.add_subcommand("params", "print the derived constants as JSON");
  params->add_option("abcd", abcd, "a b c d")->required()->expected(4);

  CommonOptions verify_opt;
  std::optional<std::uint64_t> verify_seed;
  int sweep = 0;
  auto* verify = app.add_subcommand("verify", "run every claim; JSON report");
  add_common(verify, verify_opt);
  verify->add_option("--seed", verify_seed, "seed for all sampling (required)");
  verify->add_option("--sweep", sweep, "verify at this many seeded parameter points instead");

  CommonOptions face_opt;
  std::optional<double> face_r;
  std::string grid = "360x21";
  std::vector<double> intersect;
  std::vector<std::string> mixed;
  auto* face = app.add_subcommand("face", "dual-face geometry: scan, intersections, mixed families");
  add_common(face, face_opt);
  face->add_option("--r", face_r, "extreme-point scan over |beta| in [r/2, 3r/2]; CSV");
  face->add_option("--grid", grid, "angles x radii of the scan")->capture_default_str();
  face->add_option("--intersect", intersect, "two radii r s")->delimiter(',')->expected(2);
  face->add_option("--mixed", mixed, "horizontal and vertical circle tags, e.g. C1,L0")
      ->delimiter(',')
      ->expected(2);

  CommonOptions state_opt;
  std::vector<double> circles, vertical;
  std::vector<int> points{5, 5};
  std::optional<std::uint64_t> state_seed;
  auto* state = app.add_subcommand("state", "build and certify a boundary separable state");
  add_common(state, state_opt);
  state->add_option("--circles", circles, "two radii r,s")->delimiter(',')->expected(2);
  state->add_option("--vertical", vertical, "two angles theta,tau")->delimiter(',')->expected(2);
  state->add_option("--points", points, "points per circle")->delimiter(',')->expected(2);
  state->add_option("--seed", state_seed, "seed for the angles of a two-circle recipe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*params) return cmd_params(abcd);
    if (*verify) return cmd_verify(verify_opt, verify_seed, sweep);
    if (*face) return cmd_face(face_opt, face_r, grid, intersect, mixed);
    if (*state) return cmd_state(state_opt, circles, vertical, points, state_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "claim could not be evaluated: " << e.what() << "\n";
    return kExitClaimFailure;
  }
  return kExitUsage;
}
