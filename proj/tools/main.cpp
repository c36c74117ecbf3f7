#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "freepoints/circle.hpp"
#include "freepoints/densities.hpp"
#include "freepoints/enumerate.hpp"
#include "freepoints/freeness.hpp"
#include "freepoints/lattices.hpp"
#include "freepoints/theta.hpp"
#include "freepoints/verify.hpp"
#include "freepoints/version.hpp"
#include "run_context.hpp"

namespace freepoints::cli {
namespace {

struct Common {
  std::string form_file;
  std::string discriminant;
  std::string output;
  std::uint64_t budget = kDefaultNodeBudget;
};

IntVector ParseVector(std::string text) {
  for (char& ch : text) {
    if (ch == ':' || ch == ',') ch = ' ';
  }
  std::istringstream in(text);
  IntVector v;
  Integer value = 0;
  while (in >> value) v.push_back(value);
  if (!in.eof() || v.empty()) throw DomainError("cannot parse integer vector '" + text + "'");
  return v;
}

// Rows are separated by ';' or '|'.
std::vector<std::vector<double>> ParseMatrix(std::string text) {
  std::replace(text.begin(), text.end(), '|', ';');
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    for (char& ch : row) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(row);
    std::vector<double> values;
    double v = 0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw DomainError("cannot parse matrix row '" + row + "'");
    if (!values.empty()) rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DomainError("empty matrix");
  return rows;
}

Form LoadForm(Common const& common) {
  if (common.form_file.empty()) throw DomainError("--form is required");
  Form f = Form::Load(common.form_file);
  if (!common.discriminant.empty()) f = f.WithDiscriminant(mpz_class(common.discriminant));
  return f;
}

EnumerationPlan::Method ParseMethod(std::string const& name) {
  if (name == "auto") return EnumerationPlan::Method::kAuto;
  if (name == "naive") return EnumerationPlan::Method::kNaive;
  if (name == "mitm") return EnumerationPlan::Method::kMeetInTheMiddle;
  throw DomainError("unknown method '" + name + "' (auto, naive, mitm)");
}

NormKind ParseNorm(std::string const& name) {
  if (name == "euclidean") return NormKind::kEuclidean;
  if (name == "max") return NormKind::kMax;
  throw DomainError("unknown norm '" + name + "' (euclidean, max)");
}

Json MinimaJson(std::vector<Rational> const& minima) {
  Json out = Json::array();
  for (auto const& s : minima) out.push_back(ToString(s));
  return out;
}

void AddCommon(CLI::App* sub, Common& common, bool form) {
  if (form) {
    sub->add_option("--form", common.form_file, "polynomial file (c e1 … en per line)");
    sub->add_option("--discriminant", common.discriminant, "|Δ_f| when known");
  }
  sub->add_option("--output", common.output, "output prefix; stdout when omitted");
  sub->add_option("--budget", common.budget, "enumeration node cap")
      ->capture_default_str();
}

struct ArcFlags {
  double radius = 100;
  int k = 1;
  double epsilon = 0;
  double eta = 0.1;
  std::optional<double> c_f;
  int degree = 3;

  void Add(CLI::App* sub) {
    sub->add_option("--R", radius, "radius R")->capture_default_str();
    sub->add_option("--k", k, "X = R/k")->capture_default_str();
    sub->add_option("--epsilon", epsilon, "Y = R^{1−ε}")->capture_default_str();
    sub->add_option("--eta", eta, "η")->capture_default_str();
    sub->add_option("--C_f", c_f, "major-arc constant (calibrated when omitted)");
  }
  ArcConfig Config(double c) const { return ArcConfig::FromRadius(radius, k, epsilon, eta, c, degree); }
};

using Runner = std::function<void(RunContext&)>;

struct Command {
  CLI::App* app;
  Runner run;
};

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"freepoints: rational points, lattice freeness and circle-method probes", "freepoints"};
  app.set_version_flag("--version", std::string(Version()));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  std::vector<Command> commands;

  // survey
  {
    auto* sub = app.add_subcommand("survey", "freeness survey of every point with ‖x‖ ≤ B");
    AddCommon(sub, common, true);
    auto cfg = std::make_shared<SurveyConfig>();
    auto method = std::make_shared<std::string>("auto");
    sub->add_option("--B", cfg->bound, "height bound")->required();
    sub->add_option("--epsilon", cfg->epsilon, "freeness threshold ε")->capture_default_str();
    sub->add_option("--method", *method, "auto, naive or mitm")->capture_default_str();
    sub->add_flag("--tangent-check", cfg->tangent_check, "evaluate the quotient-lattice inequality");
    commands.push_back({sub, [&common, cfg, method](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          cfg->method = ParseMethod(*method);
                          cfg->budget = common.budget;
                          SurveyResult const survey = FreenessSurvey(f, *cfg);
                          ctx.WriteArtifact("csv", SurveyCsv(survey));
                          ctx.Emit(Json::parse(SurveyJson(survey)));
                        }});
  }

  // count
  {
    auto* sub = app.add_subcommand("count", "N_V(B): projective points with ‖x‖ ≤ B");
    AddCommon(sub, common, true);
    auto plan = std::make_shared<EnumerationPlan>();
    auto method = std::make_shared<std::string>("auto");
    auto shell = std::make_shared<std::optional<double>>();
    sub->add_option("--B", plan->box_bound, "height bound")->required();
    sub->add_option("--method", *method, "auto, naive or mitm")->capture_default_str();
    sub->add_option("--shell", *shell, "restrict to R/2 < ‖x‖ ≤ R");
    commands.push_back({sub, [&common, plan, method, shell](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          plan->method = ParseMethod(*method);
                          plan->budget = common.budget;
                          if (*shell) plan->shell = Shell{**shell};
                          auto const start = std::chrono::steady_clock::now();
                          EnumerationResult const result = EnumeratePoints(f, *plan);
                          double const elapsed = std::chrono::duration<double>(
                                                     std::chrono::steady_clock::now() - start)
                                                     .count();
                          if (!result.complete) throw BudgetExceeded("enumeration ran out of budget");
                          std::ostringstream csv;
                          csv << "x,norm_sq\n";
                          for (auto const& x : result.points) csv << JoinColon(x) << ',' << NormSq(x) << '\n';
                          ctx.WriteArtifact("csv", csv.str());
                          ctx.Emit({{"B", plan->box_bound},
                                    {"count", result.points.size()},
                                    {"elapsed", elapsed},
                                    {"budget_used", result.budget_used}});
                        }});
  }

  // e-star
  {
    auto* sub = app.add_subcommand("e-star", "E*_{V,ε}(R) against its theta majorant");
    AddCommon(sub, common, true);
    auto radius = std::make_shared<double>(8);
    auto epsilon = std::make_shared<double>(0);
    auto tol = std::make_shared<double>(kDefaultThetaTol);
    auto moebius = std::make_shared<bool>(false);
    sub->add_option("--R", *radius, "shell radius")->capture_default_str();
    sub->add_option("--epsilon", *epsilon, "ε")->capture_default_str();
    sub->add_option("--tol", *tol, "theta tolerance")->capture_default_str();
    sub->add_flag("--moebius", *moebius, "also run the Möbius identity check");
    commands.push_back({sub, [&common, radius, epsilon, tol, moebius](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          EStarResult const e = CountEStar(f, *radius, *epsilon, *tol, common.budget);
                          Json out{{"R", *radius},
                                   {"epsilon", *epsilon},
                                   {"count", e.count},
                                   {"shell_points", e.shell_points},
                                   {"majorant", e.majorant}};
                          Json skew = Json::array();
                          for (auto const& x : e.skew_points) skew.push_back(JoinColon(x));
                          out["skew_points"] = skew;
                          if (*moebius) {
                            MoebiusCheck const m =
                                MoebiusIdentityCheck(f, *radius, *epsilon, *tol, common.budget);
                            out["moebius"] = {{"direct", m.direct},
                                              {"inverted", m.inverted},
                                              {"residual", m.residual},
                                              {"tolerance_budget", m.tolerance_budget},
                                              {"terms", m.terms}};
                            if (!(m.residual <= m.tolerance_budget)) {
                              throw ContractViolation("Möbius identity residual exceeds its budget", out);
                            }
                          }
                          if (!(e.majorant >= static_cast<double>(e.count))) {
                            throw ContractViolation("theta majorant below E*", out);
                          }
                          ctx.Emit(out);
                        }});
  }

  // tangent-count
  {
    auto* sub = app.add_subcommand("tangent-count", "pairs (x, y) with f(x) = 0, y·∇f(x) = 0");
    AddCommon(sub, common, true);
    auto bound = std::make_shared<double>(0);
    auto y_bound = std::make_shared<double>(0);
    auto primitive = std::make_shared<bool>(false);
    sub->add_option("--B", *bound, "bound on ‖x‖")->required();
    sub->add_option("--Y", *y_bound, "bound on ‖y‖")->required();
    sub->add_flag("--primitive-only", *primitive, "restrict x to primitive vectors");
    commands.push_back({sub, [&common, bound, y_bound, primitive](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          std::int64_t const count =
                              CountTangentPairs(f, *bound, *y_bound, *primitive, common.budget);
                          ctx.Emit({{"B", *bound}, {"Y", *y_bound}, {"primitive_only", *primitive},
                                    {"count", count}});
                        }});
  }

  // theta
  {
    auto* sub = app.add_subcommand("theta", "θ_Λ(R) with certified truncation and Poisson check");
    AddCommon(sub, common, false);
    auto literal = std::make_shared<std::string>();
    auto radius = std::make_shared<double>(1);
    auto tol = std::make_shared<double>(kDefaultThetaTol);
    sub->add_option("--lattice", *literal, "basis rows, e.g. \"1 0; 0 5\" or 1,0|0,5")->required();
    sub->add_option("--R", *radius, "radius")->capture_default_str();
    sub->add_option("--tol", *tol, "tolerance")->capture_default_str();
    commands.push_back({sub, [&common, literal, radius, tol](RunContext& ctx) {
                          Lattice const lattice = Lattice::Parse(*literal);
                          Budget budget(common.budget);
                          ThetaValue const v = ThetaSum(lattice, *radius, *tol, budget);
                          double const residual = PoissonResidual(lattice, *radius, *tol, budget);
                          Json out{{"value", v.value},
                                   {"truncation_radius", v.truncation_radius},
                                   {"tail_bound", v.tail_bound},
                                   {"poisson_residual", residual}};
                          if (!(residual <= 4 * *tol)) {
                            throw ContractViolation("Poisson residual exceeds 4·tol", out);
                          }
                          ctx.Emit(out);
                        }});
  }

  // majorant
  {
    auto* sub = app.add_subcommand("majorant", "Gaussian majorant of the skewness indicator");
    AddCommon(sub, common, false);
    auto literal = std::make_shared<std::string>();
    auto radius = std::make_shared<double>(1);
    auto tol = std::make_shared<double>(kDefaultThetaTol);
    sub->add_option("--lattice", *literal, "basis rows, e.g. \"1 0; 0 5\" or 1,0|0,5")->required();
    sub->add_option("--R", *radius, "radius")->capture_default_str();
    sub->add_option("--tol", *tol, "tolerance")->capture_default_str();
    commands.push_back({sub, [&common, literal, radius, tol](RunContext& ctx) {
                          Lattice const lattice = Lattice::Parse(*literal);
                          Budget budget(common.budget);
                          double const majorant = SkewMajorant(lattice, *radius, *tol, budget);
                          bool const indicator = SkewIndicator(lattice, *radius, budget);
                          MinimaProfile const minima = SuccessiveMinima(lattice, budget);
                          Json out{{"majorant", majorant},
                                   {"indicator", indicator},
                                   {"minima_sq", MinimaJson(minima.minima_sq)}};
                          if (majorant < (indicator ? 1.0 : 0.0)) {
                            throw ContractViolation("majorant below the indicator", out);
                          }
                          ctx.Emit(out);
                        }});
  }

  // arcs
  {
    auto* sub = app.add_subcommand("arcs", "major-arc membership and Dirichlet approximation");
    AddCommon(sub, common, false);
    auto flags = std::make_shared<ArcFlags>();
    flags->Add(sub);
    auto degree = std::make_shared<int>(3);
    auto betas = std::make_shared<std::vector<double>>();
    auto grid = std::make_shared<int>(0);
    auto q_bound = std::make_shared<std::optional<double>>();
    sub->add_option("--d", *degree, "degree")->capture_default_str();
    sub->add_option("--beta", *betas, "points β to classify")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->add_option("--grid", *grid, "classify β = i/N for i < N");
    sub->add_option("--Q", *q_bound, "also report the Dirichlet approximation with q ≤ Q");
    commands.push_back({sub, [flags, degree, betas, grid, q_bound](RunContext& ctx) {
                          flags->degree = *degree;
                          ArcConfig const config = flags->Config(flags->c_f.value_or(1));
                          std::vector<double> points = *betas;
                          for (int i = 0; i < *grid; ++i) points.push_back(static_cast<double>(i) / *grid);
                          if (points.empty()) throw DomainError("give --beta or --grid");
                          std::ostringstream csv;
                          csv << "beta,major,a,q,remainder";
                          if (*q_bound) csv << ",dirichlet_a,dirichlet_q,dirichlet_remainder";
                          csv << '\n';
                          std::int64_t major = 0;
                          for (double beta : points) {
                            auto const arc = IsMajorArc(beta, config);
                            csv << FormatDouble(beta) << ',' << (arc ? 1 : 0) << ',';
                            if (arc) {
                              ++major;
                              csv << arc->a << ',' << arc->q << ',' << FormatDouble(arc->remainder);
                            } else {
                              csv << ",,";
                            }
                            if (*q_bound) {
                              RationalApprox const r = DirichletApprox(beta, **q_bound);
                              csv << ',' << r.a << ',' << r.q << ',' << FormatDouble(r.remainder);
                            }
                            csv << '\n';
                          }
                          if (ctx.has_prefix()) {
                            ctx.WriteArtifact("csv", csv.str());
                            ctx.Emit({{"points", points.size()}, {"major", major},
                                      {"X", config.x_scale}, {"Y", config.y_scale},
                                      {"C_f", config.c_f}});
                          } else {
                            std::cout << csv.str();
                          }
                        }});
  }

  // s-beta
  {
    auto* sub = app.add_subcommand("s-beta", "S(β) by direct summation and by Poisson");
    AddCommon(sub, common, true);
    auto x = std::make_shared<std::string>();
    auto beta = std::make_shared<double>(0);
    auto y = std::make_shared<double>(10);
    auto tol = std::make_shared<double>(1e-10);
    sub->add_option("--x", *x, "point, e.g. 1:-1:2:-2")->required();
    sub->add_option("--beta", *beta, "β")->capture_default_str();
    sub->add_option("--Y", *y, "Y")->capture_default_str();
    sub->add_option("--tol", *tol, "tail tolerance relative to Yⁿ")->capture_default_str();
    commands.push_back({sub, [&common, x, beta, y, tol](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          IntVector const point = ParseVector(*x);
                          SBetaValue const v = SBeta(f, point, *beta, *y, *tol);
                          ctx.Emit({{"x", JoinColon(point)}, {"beta", *beta}, {"Y", *y},
                                    {"direct", v.direct}, {"poisson", v.poisson},
                                    {"difference", v.direct - v.poisson}});
                        }});
  }

  // major-integral
  {
    auto* sub = app.add_subcommand("major-integral",
                                   "integral of S(β) over the modified major arcs");
    AddCommon(sub, common, true);
    auto flags = std::make_shared<ArcFlags>();
    flags->Add(sub);
    auto x = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-6);
    sub->add_option("--x", *x, "point, e.g. 1:-1:2:-2")->required();
    sub->add_option("--tol", *tol, "quadrature tolerance relative to the prediction")
        ->capture_default_str();
    commands.push_back({sub, [&common, flags, x, tol](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          IntVector const point = ParseVector(*x);
                          flags->degree = f.degree();
                          double c_f = 0;
                          if (flags->c_f) {
                            c_f = *flags->c_f;
                          } else {
                            // calibrate on the shell X/2 < ‖x‖ ≤ X, or the point itself
                            ArcConfig const probe = flags->Config(1);
                            EnumerationPlan plan;
                            plan.shell = Shell{probe.x_scale};
                            plan.budget = common.budget;
                            std::vector<IntVector> sample = EnumeratePoints(f, plan).points;
                            if (sample.empty()) sample.push_back(point);
                            c_f = CalibrateArcConstant(f, sample, probe);
                          }
                          ArcConfig const config = flags->Config(c_f);
                          MajorArcIntegral const r = MajorArcIntegrate(f, point, config, *tol);
                          ctx.Emit({{"x", JoinColon(point)},
                                    {"X", config.x_scale},
                                    {"Y", config.y_scale},
                                    {"C_f", config.c_f},
                                    {"integral", r.integral},
                                    {"lemma_major_prime_prediction", r.prediction},
                                    {"relative_deviation", r.relative_deviation},
                                    {"flagged", r.flagged},
                                    {"arcs", r.arcs},
                                    {"grad_gcd", r.grad_gcd}});
                        }});
  }

  // count-m
  {
    auto* sub = app.add_subcommand("count-m", "𝓜(τ; P, Q) by exhaustive search");
    AddCommon(sub, common, true);
    auto tau = std::make_shared<double>(0);
    auto p = std::make_shared<double>(2);
    auto q = std::make_shared<double>(1);
    auto norm = std::make_shared<std::string>("euclidean");
    auto zeros = std::make_shared<bool>(false);
    sub->add_option("--tau", *tau, "τ")->capture_default_str();
    sub->add_option("--P", *p, "‖uᵢ‖ < P")->capture_default_str();
    sub->add_option("--Q", *q, "⟨τ m_j⟩ < 1/Q")->capture_default_str();
    sub->add_option("--norm", *norm, "euclidean or max")->capture_default_str();
    sub->add_flag("--zeros", *zeros, "count tuples with every m_j = 0 instead");
    commands.push_back({sub, [&common, tau, p, q, norm, zeros](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          NormKind const kind = ParseNorm(*norm);
                          std::int64_t const count =
                              *zeros ? CountMultilinearZeros(f, *p, kind, common.budget)
                                     : CountM(*tau, f, *p, *q, kind, common.budget);
                          ctx.Emit({{"tau", *tau}, {"P", *p}, {"Q", *q}, {"norm", *norm},
                                    {"zeros_only", *zeros}, {"count", count}});
                        }});
  }

  // shrink
  {
    auto* sub = app.add_subcommand("shrink", "N_{γ,P,Q} / N_{γ,θP,Q/θ}");
    AddCommon(sub, common, false);
    auto gamma = std::make_shared<std::string>();
    auto p = std::make_shared<double>(50);
    auto q = std::make_shared<double>(50);
    auto theta = std::make_shared<double>(0.5);
    auto norm = std::make_shared<std::string>("euclidean");
    sub->add_option("--gamma", *gamma, "symmetric matrix rows, e.g. \"0.3 0.1; 0.1 0.7\" or 0.3,0.1|0.1,0.7")
        ->required();
    sub->add_option("--P", *p, "P")->capture_default_str();
    sub->add_option("--Q", *q, "Q")->capture_default_str();
    sub->add_option("--theta", *theta, "θ ∈ (0, 1]")->capture_default_str();
    sub->add_option("--norm", *norm, "euclidean or max")->capture_default_str();
    commands.push_back({sub, [&common, gamma, p, q, theta, norm](RunContext& ctx) {
                          auto const g = ParseMatrix(*gamma);
                          NormKind const kind = ParseNorm(*norm);
                          std::int64_t const top = CountShrink(g, *p, *q, kind, common.budget);
                          std::int64_t const bottom =
                              CountShrink(g, *theta * *p, *q / *theta, kind, common.budget);
                          ctx.Emit({{"P", *p}, {"Q", *q}, {"theta", *theta},
                                    {"N_P_Q", top}, {"N_shrunk", bottom},
                                    {"ratio", static_cast<double>(top) / static_cast<double>(bottom)}});
                        }});
  }

  // lemma23
  {
    auto* sub = app.add_subcommand("lemma23", "check the rational-approximation lemma");
    AddCommon(sub, common, false);
    auto m = std::make_shared<Integer>(0);
    auto a = std::make_shared<Integer>(0);
    auto q = std::make_shared<Integer>(1);
    auto z = std::make_shared<double>(0);
    auto m_bound = std::make_shared<double>(10);
    auto r = std::make_shared<double>(20);
    auto grid = std::make_shared<int>(0);
    sub->add_option("--m", *m, "m")->capture_default_str();
    sub->add_option("--a", *a, "a")->capture_default_str();
    sub->add_option("--q", *q, "q")->capture_default_str();
    sub->add_option("--z", *z, "z")->capture_default_str();
    sub->add_option("--M", *m_bound, "M")->capture_default_str();
    sub->add_option("--R", *r, "R")->capture_default_str();
    sub->add_option("--grid", *grid, "exhaustive grid with this many z steps per side");
    commands.push_back({sub, [m, a, q, z, m_bound, r, grid](RunContext& ctx) {
                          if (*grid > 0) {
                            std::int64_t checked = 0;
                            Json bad = Json::array();
                            auto const q_max = static_cast<Integer>(std::floor(*r / 2));
                            auto const m_max = static_cast<Integer>(std::floor(*m_bound));
                            for (Integer qq = 1; qq <= q_max; ++qq) {
                              double const z_max = 1 / (2 * static_cast<double>(qq) * *m_bound);
                              for (Integer aa = 0; aa < qq; ++aa) {
                                if (Gcd(aa, qq) != 1) continue;
                                for (int zi = -*grid; zi <= *grid; ++zi) {
                                  double const zz = z_max * zi / *grid;
                                  for (Integer mm = -m_max; mm <= m_max; ++mm) {
                                    ++checked;
                                    if (!Lemma23Holds(mm, aa, qq, zz, *m_bound, *r)) {
                                      bad.push_back({{"m", mm}, {"a", aa}, {"q", qq}, {"z", zz}});
                                    }
                                  }
                                }
                              }
                            }
                            Json out{{"M", *m_bound}, {"R", *r}, {"checked", checked},
                                     {"counterexamples", bad}};
                            if (!bad.empty()) throw ContractViolation("nonzero m satisfies every hypothesis", out);
                            ctx.Emit(out);
                            return;
                          }
                          Lemma23Hypotheses const h = Lemma23Check(*m, *a, *q, *z, *m_bound, *r);
                          ctx.Emit({{"m_bounded", h.m_bounded},
                                    {"near_integer", h.near_integer},
                                    {"z_small", h.z_small},
                                    {"q_small", h.q_small},
                                    {"q_large", h.q_large},
                                    {"hypotheses_hold", h.all()},
                                    {"conclusion_holds", !h.all() || *m == 0}});
                        }});
  }

  // c-dn
  {
    auto* sub = app.add_subcommand("c-dn", "the freeness threshold c_{d,n}");
    AddCommon(sub, common, false);
    auto d = std::make_shared<int>(3);
    auto n = std::make_shared<int>(25);
    auto exponents = std::make_shared<bool>(false);
    sub->add_option("--d", *d, "degree")->capture_default_str();
    sub->add_option("--n", *n, "variables")->capture_default_str();
    sub->add_flag("--exponents", *exponents, "also print D and E");
    commands.push_back({sub, [d, n, exponents](RunContext& ctx) {
                          std::string text = ToString(CDn(*d, *n));
                          if (*exponents) {
                            text += "\nD = " + ToString(ExponentD(*d, *n)) +
                                    "\nE = " + ToString(ExponentE(*d, *n));
                          }
                          ctx.EmitText(text);
                        }});
  }

  // densities
  {
    auto* sub = app.add_subcommand("densities", "truncated local densities and their product");
    AddCommon(sub, common, true);
    auto p_max = std::make_shared<Integer>(50);
    auto tol = std::make_shared<double>(0.01);
    auto options = std::make_shared<SigmaInfOptions>();
    auto prime = std::make_shared<std::optional<Integer>>();
    auto level = std::make_shared<int>(1);
    sub->add_option("--p-max", *p_max, "largest prime in the product")->capture_default_str();
    sub->add_option("--tol", *tol, "target relative standard error of σ_∞")->capture_default_str();
    sub->add_option("--seed", options->seed, "σ_∞ sampler seed")->capture_default_str();
    sub->add_option("--p", *prime, "only σ_p at this prime");
    sub->add_option("--level", *level, "level k for --p")->capture_default_str();
    commands.push_back({sub, [&common, p_max, tol, options, prime, level](RunContext& ctx) {
                          Form const f = LoadForm(common);
                          if (*prime) {
                            ctx.Emit({{"p", **prime},
                                      {"k", *level},
                                      {"sigma_p", ToString(SigmaP(f, **prime, *level, common.budget))},
                                      {"sigma_p_primitive",
                                       ToString(SigmaPPrimitive(f, **prime, *level, common.budget))}});
                            return;
                          }
                          DensityEstimate const e = LeadingConstant(f, *p_max, *tol, *options, common.budget);
                          ctx.Emit(Json::parse(DensityJson(e)));
                        }});
  }

  // verify-lemmas
  {
    auto* sub = app.add_subcommand("verify-lemmas", "run property suites");
    AddCommon(sub, common, false);
    auto suite = std::make_shared<std::string>("all");
    auto options = std::make_shared<VerifyOptions>();
    sub->add_option("--suite", *suite, "lattices, theta, freeness, circle, densities or all")
        ->capture_default_str();
    sub->add_option("--samples", options->samples, "random instances per property")
        ->capture_default_str();
    sub->add_option("--seed", options->seed, "seed")->capture_default_str();
    commands.push_back({sub, [suite, options](RunContext& ctx) {
                          SuiteReport const report = RunSuite(*suite, *options);
                          Json const out = Json::parse(ReportJson(report));
                          if (!report.passed()) throw ContractViolation("property suite failed", out);
                          ctx.Emit(out);
                        }});
  }

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = ExpandConfig(std::move(args));
  } catch (Error const& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (char const* env = std::getenv("FREEPOINTS_BUDGET")) {
    try {
      common.budget = std::stoull(env);
    } catch (std::exception const&) {
      std::cerr << "config error: FREEPOINTS_BUDGET must be a positive integer\n";
      return kExitConfig;
    }
  }

  for (auto const& command : commands) {
    if (!command.app->parsed()) continue;
    std::optional<std::filesystem::path> prefix;
    if (!common.output.empty()) prefix = common.output;
    try {
      RunContext ctx(command.app->get_name(), prefix);
      try {
        command.run(ctx);
        ctx.WriteManifest(*command.app, common.budget);
      } catch (ContractViolation const& e) {
        ctx.WriteArtifact("violation.json", e.record().dump(2) + "\n");
        ctx.WriteManifest(*command.app, common.budget);
        std::cerr << "invariant violation: " << e.what() << "\n" << e.record().dump(2) << "\n";
        return kExitInvariant;
      }
    } catch (BudgetExceeded const& e) {
      std::cerr << "budget exceeded: " << e.what() << "\n";
      return kExitBudget;
    } catch (InvariantViolation const& e) {
      std::cerr << "invariant violation: " << e.what() << "\n";
      return kExitInvariant;
    } catch (Error const& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    } catch (std::exception const& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return 0;
}

}  // namespace freepoints::cli

int main(int argc, char** argv) { return freepoints::cli::Main(argc, argv); }
