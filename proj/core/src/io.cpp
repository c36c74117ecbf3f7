#include <json.hpp>

#include "freepoints/densities.hpp"
#include "freepoints/freeness.hpp"
#include "freepoints/verify.hpp"
#include "freepoints/version.hpp"

namespace freepoints {

using Json = nlohmann::ordered_json;

std::string_view Version() { return FREEPOINTS_VERSION; }

std::string SurveyJson(SurveyResult const& survey) {
  Json out;
  out["n_vars"] = survey.n_vars;
  out["degree"] = survey.degree;
  out["bound"] = survey.bound;
  out["epsilon"] = survey.epsilon;
  out["n_total"] = survey.n_total;
  out["n_records"] = survey.records.size();
  out["n_free"] = survey.n_free;
  out["n_skew"] = survey.n_skew;
  out["median"] = survey.median;
  out["mean"] = survey.mean;
  out["reference"] = survey.reference;
  Json excluded = Json::array();
  for (auto const& x : survey.excluded) excluded.push_back(JoinColon(x));
  out["excluded"] = excluded;
  Json histogram = Json::array();
  for (auto const& [bin, count] : survey.histogram) {
    histogram.push_back({{"lo", bin * kHistogramWidth},
                         {"hi", (bin + 1) * kHistogramWidth},
                         {"count", count}});
  }
  out["histogram"] = histogram;
  out["tangent_checked"] = survey.tangent_checked;
  Json violations = Json::array();
  for (auto const& x : survey.tangent_violations) violations.push_back(JoinColon(x));
  out["tangent_violations"] = violations;
  out["budget_used"] = survey.budget_used;
  return out.dump(2);
}

std::string DensityJson(DensityEstimate const& estimate) {
  Json out;
  out["p_max"] = estimate.p_max;
  Json sigma_p = Json::object();
  for (auto const& [p, v] : estimate.sigma_p) sigma_p[std::to_string(p)] = ToString(v);
  out["sigma_p"] = sigma_p;
  Json levels = Json::object();
  for (auto const& [p, k] : estimate.levels) levels[std::to_string(p)] = k;
  out["levels"] = levels;
  Json next = Json::object();
  for (auto const& [p, v] : estimate.sigma_p_next) next[std::to_string(p)] = ToString(v);
  out["sigma_p_next_level"] = next;
  out["bad_primes"] = estimate.bad_primes;
  auto const& s = estimate.sigma_inf;
  out["sigma_inf"] = {{"value", s.value},
                      {"std_error", s.std_error},
                      {"tau", s.tau},
                      {"converged", s.converged},
                      {"tau_values", s.tau_values},
                      {"tau_errors", s.tau_errors},
                      {"points_per_shift", s.points_per_shift},
                      {"seed", s.seed}};
  out["product"] = estimate.product;
  Json partial = Json::array();
  for (auto const& [p, v] : estimate.partial_products) partial.push_back({{"p", p}, {"value", v}});
  out["partial_products"] = partial;
  return out.dump(2);
}

std::string ReportJson(SuiteReport const& report) {
  Json out;
  out["passed"] = report.passed();
  Json rows = Json::array();
  for (auto const& r : report.results) {
    rows.push_back({{"suite", r.suite},
                    {"property", r.name},
                    {"passed", r.passed},
                    {"checked", r.checked},
                    {"detail", r.detail}});
  }
  out["properties"] = rows;
  return out.dump(2);
}

}  // namespace freepoints
