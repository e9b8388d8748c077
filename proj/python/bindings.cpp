#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trcm/audit.hpp"
#include "trcm/auction.hpp"
#include "trcm/bandit.hpp"
#include "trcm/error.hpp"
#include "trcm/harness.hpp"
#include "trcm/mechanism.hpp"

namespace py = pybind11;
using namespace trcm;

namespace {

CostDistribution make_cost(const std::string& family, double lo, double hi, double mu, double sigma) {
  if (family == "uniform") return CostDistribution::uniform(lo, hi);
  if (family == "lognormal") return CostDistribution::lognormal_truncated(mu, sigma, lo, hi);
  throw ValidationError("unknown cost family '" + family + "'");
}

py::dict result_dict(const ExperimentResult& r) {
  py::dict d;
  d["mean_cum_regret"] = r.mean_cum_regret;
  d["mean_round_regret"] = r.mean_round_regret;
  d["mean_user_utility"] = r.mean_user_utility;
  d["mean_clairvoyant_utility"] = r.mean_clairvoyant_utility;
  d["round_csv"] = round_csv(r);
  d["run_csv"] = run_csv(r);
  return d;
}

py::dict report_dict(const AuditReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["trials"] = r.trials;
  d["violations"] = r.violations;
  d["worst_margin"] = r.worst_margin;
  d["standard_error"] = r.standard_error;
  d["passed"] = r.pass;
  d["detail"] = r.detail;
  d["csv"] = r.to_csv();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Truthful reverse auctions with a staged contextual bandit";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<CostDistribution>(m, "CostDistribution")
      .def(py::init(&make_cost), py::arg("family"), py::arg("lo"), py::arg("hi"),
           py::arg("mu") = 0.0, py::arg("sigma") = 1.0)
      .def_property_readonly("lo", &CostDistribution::lo)
      .def_property_readonly("hi", &CostDistribution::hi)
      .def("cdf", &CostDistribution::cdf)
      .def("pdf", &CostDistribution::pdf)
      .def("quantile", &CostDistribution::quantile)
      .def("virtual_cost", &CostDistribution::virtual_cost);

  m.def(
      "allocate_optimal",
      [](const std::vector<double>& values, const std::vector<double>& psi) {
        const AuctionOutcome out = allocate_optimal(values, psi);
        return py::make_tuple(out.winner, out.surpluses);
      },
      py::arg("values"), py::arg("virtual_costs"),
      "(winner or None, surpluses) for one reverse auction.");
  m.def(
      "critical_payment",
      [](const std::vector<double>& values, const std::vector<CostDistribution>& dists,
         std::size_t winner, const std::vector<double>& costs) {
        return critical_payment(values, dists, winner, costs);
      },
      py::arg("values"), py::arg("dists"), py::arg("winner"), py::arg("costs"));

  m.def("sherman_morrison_update", &sherman_morrison_update, py::arg("gram_inverse"), py::arg("x"));

  m.def(
      "rosa_apply",
      [](double bid, double mu, double cost_upper, bool resample, double gamma) {
        return rosa_apply(bid, mu, cost_upper, resample, gamma).modified_bid;
      },
      py::arg("bid"), py::arg("mu"), py::arg("cost_upper"), py::arg("resample"), py::arg("gamma"));
  m.def(
      "rev_gtm_payment",
      [](double bid, double mu, double cost_upper, bool resampled, bool allocated) {
        return rev_gtm_payment(rosa_apply(bid, mu, cost_upper, resampled, 0.0), allocated);
      },
      py::arg("bid"), py::arg("mu"), py::arg("cost_upper"), py::arg("resampled"),
      py::arg("allocated"));

  m.def(
      "run_experiment",
      [](std::size_t rounds, std::size_t seeds, std::size_t providers, int dim, double mu,
         double alpha, const std::string& reward, const std::string& cost_family,
         std::uint64_t base_seed, const std::string& out) {
        ExperimentConfig c;
        c.rounds = rounds;
        c.seeds = seeds;
        c.providers = providers;
        c.dim = dim;
        c.mu = mu;
        c.alpha = alpha;
        if (reward == "exponential") {
          c.reward = RewardModel::Kind::ExponentialSoftplus;
        } else if (reward != "gaussian") {
          throw ValidationError("reward must be 'gaussian' or 'exponential'");
        }
        if (cost_family == "lognormal") {
          c.cost_family = CostFamily::LogNormal;
        } else if (cost_family != "uniform") {
          throw ValidationError("cost_family must be 'uniform' or 'lognormal'");
        }
        c.base_seed = base_seed;
        c.output_dir = out;
        py::gil_scoped_release release;
        ExperimentResult r = run_experiment(c);
        py::gil_scoped_acquire acquire;
        return result_dict(r);
      },
      py::arg("rounds") = 10000, py::arg("seeds") = 40, py::arg("providers") = 4,
      py::arg("dim") = 5, py::arg("mu") = 0.05, py::arg("alpha") = 0.75,
      py::arg("reward") = "gaussian", py::arg("cost_family") = "uniform",
      py::arg("base_seed") = 1, py::arg("out") = "");

  m.def(
      "run_audit",
      [](const std::string& check, std::size_t trials) {
        const AuditCheck c = parse_audit_check(check);
        AuditPlan plan = default_audit_plan(c);
        if (trials > 0) plan.trials = trials;
        AuditReport r;
        {
          py::gil_scoped_release release;
          r = run_audit(c, plan);
        }
        return report_dict(r);
      },
      py::arg("check"), py::arg("trials") = 0);
}
