#include "simplexdiff/report_io.hpp"

namespace simplexdiff {

using nlohmann::json;

void to_json(json& j, const KsReport& r) {
  j = json{{"statistic", r.statistic},
           {"n_samples", r.n_samples},
           {"threshold", r.threshold},
           {"pass", r.pass}};
}

void from_json(const json& j, KsReport& r) {
  j.at("statistic").get_to(r.statistic);
  j.at("n_samples").get_to(r.n_samples);
  j.at("threshold").get_to(r.threshold);
  j.at("pass").get_to(r.pass);
}

void to_json(json& j, const KlEstimate& r) {
  j = json{{"delta_i", r.delta_i},
           {"boundary_kl", r.boundary_kl},
           {"std_error", r.std_error}};
}

void from_json(const json& j, KlEstimate& r) {
  j.at("delta_i").get_to(r.delta_i);
  j.at("boundary_kl").get_to(r.boundary_kl);
  j.at("std_error").get_to(r.std_error);
}

void to_json(json& j, const RankReport& r) {
  j = json{{"n", r.n},       {"t", r.t},     {"n_trials", r.n_trials},
           {"ranks", r.ranks}, {"q50", r.q50}, {"q90", r.q90},
           {"q99", r.q99}};
}

void from_json(const json& j, RankReport& r) {
  j.at("n").get_to(r.n);
  j.at("t").get_to(r.t);
  j.at("n_trials").get_to(r.n_trials);
  j.at("ranks").get_to(r.ranks);
  j.at("q50").get_to(r.q50);
  j.at("q90").get_to(r.q90);
  j.at("q99").get_to(r.q99);
}

void to_json(json& j, const MomentGridPoint& r) {
  j = json{{"a", r.a}, {"b", r.b}, {"theta0", r.theta0}, {"t", r.t}};
}

void from_json(const json& j, MomentGridPoint& r) {
  j.at("a").get_to(r.a);
  j.at("b").get_to(r.b);
  j.at("theta0").get_to(r.theta0);
  j.at("t").get_to(r.t);
}

void to_json(json& j, const MomentCheck& r) {
  j = json{{"point", r.point},
           {"analytic_mean", r.analytic_mean},
           {"analytic_var", r.analytic_var},
           {"mc_mean", r.mc_mean},
           {"mc_var", r.mc_var},
           {"z_mean", r.z_mean},
           {"z_var", r.z_var},
           {"status", r.status}};
}

void from_json(const json& j, MomentCheck& r) {
  j.at("point").get_to(r.point);
  j.at("analytic_mean").get_to(r.analytic_mean);
  j.at("analytic_var").get_to(r.analytic_var);
  j.at("mc_mean").get_to(r.mc_mean);
  j.at("mc_var").get_to(r.mc_var);
  j.at("z_mean").get_to(r.z_mean);
  j.at("z_var").get_to(r.z_var);
  j.at("status").get_to(r.status);
}

}  // namespace simplexdiff
