#include "csvto/benchmarks.hpp"
#include "csvto/experiment.hpp"
#include "csvto/finite_diff.hpp"
#include "csvto/geometry.hpp"
#include "csvto/kernels.hpp"
#include "csvto/mppi.hpp"
#include "csvto/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace csvto;

namespace {

std::vector<ConstraintHessian> hessians_from_dense(const std::vector<Mat>& dense) {
  std::vector<ConstraintHessian> out(dense.size());
  for (size_t l = 0; l < dense.size(); ++l) {
    out[l].available = true;
    const Mat& h = dense[l];
    for (int i = 0; i < h.rows(); ++i)
      for (int j = i; j < h.cols(); ++j)
        if (h(i, j) != 0.0) out[l].add(i, j, h(i, j));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_csvto, m) {
  m.doc() = "Constrained Stein variational trajectory optimization";

  py::class_<TrajectoryParticle>(m, "TrajectoryParticle")
      .def(py::init([](const Mat& states, const Mat& controls) {
             TrajectoryParticle p;
             p.states = states;
             p.controls = controls;
             p.validate();
             return p;
           }),
           py::arg("states"), py::arg("controls"))
      .def_readwrite("states", &TrajectoryParticle::states)
      .def_readwrite("controls", &TrajectoryParticle::controls)
      .def_property_readonly("horizon", &TrajectoryParticle::horizon)
      .def("flatten", &TrajectoryParticle::flatten)
      .def_static("unflatten", &TrajectoryParticle::unflatten, py::arg("tau"),
                  py::arg("horizon"), py::arg("state_dim"), py::arg("control_dim"));

  py::class_<AugmentedParticle>(m, "AugmentedParticle")
      .def_readwrite("particle", &AugmentedParticle::particle)
      .def_readwrite("slack", &AugmentedParticle::slack)
      .def("flatten", &AugmentedParticle::flatten);

  py::class_<ProblemDef, std::shared_ptr<ProblemDef>>(m, "ProblemDef")
      .def_readonly("horizon", &ProblemDef::horizon)
      .def_readonly("state_dim", &ProblemDef::state_dim)
      .def_readonly("control_dim", &ProblemDef::control_dim)
      .def_readwrite("x0", &ProblemDef::x0)
      .def_readwrite("gamma_lik", &ProblemDef::gamma_lik)
      .def_property_readonly("num_slack", &ProblemDef::num_slack)
      .def("cost", [](const ProblemDef& p, const TrajectoryParticle& t) { return p.cost(t); })
      .def("cost_gradient",
           [](const ProblemDef& p, const TrajectoryParticle& t) { return p.cost_gradient(t); })
      .def("log_posterior_gradient", &ProblemDef::log_posterior_gradient)
      .def("equality_values",
           [](const ProblemDef& p, const TrajectoryParticle& t) {
             return p.equality.rows ? p.equality.values(t) : Vec(0);
           })
      .def("inequality_values", [](const ProblemDef& p, const TrajectoryParticle& t) {
        return p.inequality.rows ? p.inequality.values(t) : Vec(0);
      });

  // problem-api operations
  m.def(
      "rollout_dynamics",
      [](const ProblemDef& problem, const Vec& x0, const Mat& controls) {
        return rollout_dynamics(x0, controls, problem.dynamics);
      },
      py::arg("problem"), py::arg("x0"), py::arg("controls"));
  m.def(
      "assemble_defects",
      [](const ProblemDef& problem, const TrajectoryParticle& particle, const Vec& x0) {
        return assemble_defects(particle, x0, problem.dynamics);
      },
      py::arg("problem"), py::arg("particle"), py::arg("x0"));
  m.def(
      "eval_constraints",
      [](const ProblemDef& problem, const AugmentedParticle& particle) {
        const ConstraintBundle bundle = eval_constraints(problem, particle);
        return py::make_tuple(bundle.values, bundle.jacobian);
      },
      py::arg("problem"), py::arg("particle"),
      "Returns (values, jacobian) of the stacked augmented constraint system.");
  m.def(
      "augmented_penalty",
      [](const ProblemDef& problem, const AugmentedParticle& particle, double lambda) {
        return augmented_penalty(problem, particle, lambda);
      },
      py::arg("problem"), py::arg("particle"), py::arg("lambda_"));
  m.def(
      "finite_diff_jacobian",
      [](const std::function<Vec(const Vec&)>& fn, const Vec& point, double step) {
        return finite_diff_jacobian(fn, point, step);
      },
      py::arg("fn"), py::arg("point"), py::arg("step") = 1e-6);

  // constraint-geometry operations
  m.def(
      "gram_pinv",
      [](const Mat& jacobian, double cutoff) {
        const GramPinv g = gram_pinv(jacobian, cutoff);
        return py::make_tuple(g.pinv, g.retained_rank);
      },
      py::arg("jacobian"), py::arg("cutoff") = kDefaultSvdCutoff);
  m.def(
      "projection_matrix",
      [](const Mat& jacobian, double cutoff) {
        return projection_matrix(jacobian, cutoff).P;
      },
      py::arg("jacobian"), py::arg("cutoff") = kDefaultSvdCutoff);
  m.def(
      "feasibility_step",
      [](const Mat& jacobian, const Vec& values, double cutoff) {
        return feasibility_step(jacobian, values, cutoff);
      },
      py::arg("jacobian"), py::arg("values"), py::arg("cutoff") = kDefaultSvdCutoff);
  m.def(
      "projection_derivative",
      [](const Mat& jacobian, const std::vector<Mat>& hessians, double cutoff) {
        return projection_derivative(jacobian, hessians_from_dense(hessians), cutoff);
      },
      py::arg("jacobian"), py::arg("hessians"), py::arg("cutoff") = kDefaultSvdCutoff,
      "Exact d P / d tau_k per coordinate; hessians are dense per-row matrices.");
  m.def("init_slack", &init_slack, py::arg("g_values"));

  // stein-kernels operations
  m.def("rbf", &rbf, py::arg("a"), py::arg("b"), py::arg("bandwidth"));
  m.def("rbf_grad", &rbf_grad, py::arg("a"), py::arg("b"), py::arg("bandwidth"));
  m.def("median_bandwidth", &median_bandwidth, py::arg("points"));
  m.def("trajectory_kernel", &trajectory_kernel, py::arg("a"), py::arg("b"),
        py::arg("window"));
  m.def("tangent_kernel", &tangent_kernel, py::arg("k_scalar"), py::arg("pi"),
        py::arg("pj"));

  // solver
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("num_particles", &SolverConfig::num_particles)
      .def_readwrite("alpha_j", &SolverConfig::alpha_j)
      .def_readwrite("alpha_c", &SolverConfig::alpha_c)
      .def_readwrite("warm_iters", &SolverConfig::warm_iters)
      .def_readwrite("online_iters", &SolverConfig::online_iters)
      .def_readwrite("resample_steps", &SolverConfig::resample_steps)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("sigma_resample", &SolverConfig::sigma_resample)
      .def_readwrite("lambda_", &SolverConfig::lambda)
      .def_readwrite("window", &SolverConfig::window)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("anneal", &SolverConfig::anneal)
      .def_readwrite("svd_cutoff", &SolverConfig::svd_cutoff)
      .def_readwrite("init_sigma", &SolverConfig::init_sigma);

  py::class_<IterationStats>(m, "IterationStats")
      .def_readonly("max_abs_constraint", &IterationStats::max_abs_constraint)
      .def_readonly("best_penalty", &IterationStats::best_penalty)
      .def_readonly("best_cost", &IterationStats::best_cost)
      .def_readonly("max_phi_perp_norm", &IterationStats::max_phi_perp_norm)
      .def_readonly("max_phi_c_norm", &IterationStats::max_phi_c_norm);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("best", &SolveResult::best)
      .def_readonly("best_index", &SolveResult::best_index)
      .def_readonly("particles", &SolveResult::particles)
      .def_readonly("iterations", &SolveResult::iterations)
      .def("best_trajectory", &SolveResult::best_trajectory);

  m.def(
      "solve",
      [](const ProblemDef& problem, const Vec& x0,
         const std::vector<TrajectoryParticle>& init, int iters, bool anneal,
         const SolverConfig& cfg) { return solve(problem, x0, init, iters, anneal, cfg); },
      py::arg("problem"), py::arg("x0"), py::arg("init"), py::arg("iters"),
      py::arg("anneal"), py::arg("config"));
  m.def("shift",
        py::overload_cast<const TrajectoryParticle&>(&shift), py::arg("particle"));
  m.def(
      "resample",
      [](const ProblemDef& problem, const std::vector<AugmentedParticle>& particles,
         double beta, double sigma, double lambda, std::uint64_t seed) {
        Rng rng(seed);
        const ResampleResult rr = resample(problem, particles, beta, sigma, lambda, rng);
        return py::make_tuple(rr.particles, rr.weights, rr.draws, rr.uniform_fallback);
      },
      py::arg("problem"), py::arg("particles"), py::arg("beta"), py::arg("sigma"),
      py::arg("lambda_"), py::arg("seed"));
  m.def(
      "init_particles",
      [](const ProblemDef& problem, const Vec& x0, int count, std::uint64_t seed,
         double init_sigma) {
        Rng rng(seed);
        return init_particles(problem, x0, count, rng, init_sigma);
      },
      py::arg("problem"), py::arg("x0"), py::arg("count"), py::arg("seed"),
      py::arg("init_sigma") = 1.0);

  // baselines
  py::class_<MppiConfig>(m, "MppiConfig")
      .def(py::init<>())
      .def_readwrite("num_samples", &MppiConfig::num_samples)
      .def_readwrite("temperature", &MppiConfig::temperature)
      .def_readwrite("noise_sigma", &MppiConfig::noise_sigma)
      .def_readwrite("lambda_pen", &MppiConfig::lambda_pen)
      .def_readwrite("mu_pen", &MppiConfig::mu_pen)
      .def_readwrite("warm_iters", &MppiConfig::warm_iters)
      .def_readwrite("online_iters", &MppiConfig::online_iters)
      .def_readwrite("seed", &MppiConfig::seed);
  m.def("penalty_cost", &penalty_cost, py::arg("problem"), py::arg("trajectory"),
        py::arg("lambda_pen"), py::arg("mu_pen"));
  m.def(
      "mppi_step",
      [](const Mat& nominal, const ProblemDef& problem, const MppiConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        const MppiStepResult res = mppi_step(nominal, problem, cfg, rng);
        return py::make_tuple(res.controls, res.best_rollout, res.best_cost);
      },
      py::arg("nominal"), py::arg("problem"), py::arg("config"), py::arg("seed"));

  // benchmarks
  py::class_<QuadrotorParams>(m, "QuadrotorParams")
      .def(py::init<>())
      .def_readwrite("mass", &QuadrotorParams::mass)
      .def_readwrite("inertia_x", &QuadrotorParams::inertia_x)
      .def_readwrite("inertia_y", &QuadrotorParams::inertia_y)
      .def_readwrite("inertia_z", &QuadrotorParams::inertia_z)
      .def_readwrite("thrust_gain", &QuadrotorParams::thrust_gain)
      .def_readwrite("gravity", &QuadrotorParams::gravity)
      .def_readwrite("dt", &QuadrotorParams::dt);

  py::enum_<ObstacleVariant>(m, "ObstacleVariant")
      .value("NONE", ObstacleVariant::kNone)
      .value("STATIC", ObstacleVariant::kStatic)
      .value("DYNAMIC", ObstacleVariant::kDynamic);

  py::class_<QuadrotorEnv, std::shared_ptr<QuadrotorEnv>>(m, "QuadrotorEnv")
      .def("state", &QuadrotorEnv::state)
      .def("begin_plan", &QuadrotorEnv::begin_plan)
      .def("step", &QuadrotorEnv::step, py::arg("control"))
      .def("failure_reason", &QuadrotorEnv::failure_reason);

  py::class_<QuadrotorBenchmark>(m, "QuadrotorBenchmark")
      .def_property_readonly(
          "problem",
          [](const QuadrotorBenchmark& b) { return std::make_shared<ProblemDef>(b.problem); })
      .def_readonly("env", &QuadrotorBenchmark::env)
      .def_readonly("start", &QuadrotorBenchmark::start)
      .def_readonly("goal", &QuadrotorBenchmark::goal)
      .def_readonly("goal_threshold", &QuadrotorBenchmark::goal_threshold);

  m.def(
      "make_toy2d", [] { return std::make_shared<ProblemDef>(make_toy2d()); },
      "2D constrained-sampling toy problem (mixture posterior on a circle).");
  m.def("make_quadrotor", &make_quadrotor, py::arg("params"), py::arg("variant"),
        py::arg("start_seed"));
  m.def("quadrotor_hover_thrust", &quadrotor_hover_thrust, py::arg("params"));
  m.def("quadrotor_goal_distance", &quadrotor_goal_distance, py::arg("state"),
        py::arg("goal"));

  py::class_<MpcStepRecord>(m, "MpcStepRecord")
      .def_readonly("step", &MpcStepRecord::step)
      .def_readonly("state", &MpcStepRecord::state)
      .def_readonly("control", &MpcStepRecord::control)
      .def_readonly("violations", &MpcStepRecord::violations)
      .def_readonly("wall_ms", &MpcStepRecord::wall_ms);
  py::class_<MpcTrace>(m, "MpcTrace")
      .def_readonly("steps", &MpcTrace::steps)
      .def_readonly("failed", &MpcTrace::failed)
      .def_readonly("failure", &MpcTrace::failure);
  m.def(
      "mpc_run",
      [](QuadrotorEnv& env, const ProblemDef& problem, const SolverConfig& cfg,
         int total_steps) { return mpc_run(env, problem, cfg, total_steps); },
      py::arg("env"), py::arg("problem"), py::arg("config"), py::arg("total_steps"));
  m.def(
      "mppi_mpc_run",
      [](QuadrotorEnv& env, const ProblemDef& problem, const MppiConfig& cfg,
         int total_steps) { return mppi_mpc_run(env, problem, cfg, total_steps); },
      py::arg("env"), py::arg("problem"), py::arg("config"), py::arg("total_steps"));
}
