#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hawkeslab/cluster.hpp"
#include "hawkeslab/config.hpp"
#include "hawkeslab/embedding.hpp"
#include "hawkeslab/experiments.hpp"
#include "hawkeslab/genealogy.hpp"
#include "hawkeslab/hawkes_sim.hpp"
#include "hawkeslab/inar.hpp"
#include "hawkeslab/renewal_calc.hpp"
#include "hawkeslab/walks.hpp"

namespace py = pybind11;
using namespace hawkeslab;

namespace {

py::dict grid_to_dict(const GridMeasure& g) {
    std::vector<double> xs, masses;
    xs.reserve(g.site_count());
    masses.reserve(g.site_count());
    for (std::int64_t k = g.k_lo(); k <= g.k_hi(); ++k) {
        xs.push_back(g.position(k));
        masses.push_back(g.site(k));
    }
    py::dict d;
    d["h"] = g.step();
    d["x"] = xs;
    d["mass"] = masses;
    d["atom0"] = g.atom0();
    d["truncated_mass"] = g.truncated_mass();
    return d;
}

}  // namespace

PYBIND11_MODULE(_hawkeslab, m) {
    m.doc() = "critical Hawkes process simulation laboratory";

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint32_t, std::uint32_t>(), py::arg("seed"),
             py::arg("replicate") = 0, py::arg("tag") = 0)
        .def("uniform01", &RngStream::uniform01)
        .def("poisson", &RngStream::poisson)
        .def("exponential", &RngStream::exponential);

    py::class_<DisplacementSpec>(m, "DisplacementSpec")
        .def_static("pareto", &DisplacementSpec::pareto, py::arg("alpha"), py::arg("x_m"),
                    py::arg("label") = "")
        .def_static("exponential", &DisplacementSpec::exponential, py::arg("rate"),
                    py::arg("label") = "")
        .def_static("deterministic", &DisplacementSpec::deterministic, py::arg("a"),
                    py::arg("label") = "")
        .def_static("uniform", &DisplacementSpec::uniform, py::arg("a"), py::arg("b"),
                    py::arg("label") = "")
        .def_static("parse", &DisplacementSpec::parse)
        .def("cdf", &DisplacementSpec::cdf)
        .def("density", &DisplacementSpec::density)
        .def("truncated_mean", &DisplacementSpec::truncated_mean)
        .def("truncated_mean_inverse", &DisplacementSpec::truncated_mean_inverse)
        .def("truncation_for_branching", &DisplacementSpec::truncation_for_branching)
        .def("mean", &DisplacementSpec::mean)
        .def("tail_ell_laplace", &DisplacementSpec::tail_ell_laplace)
        .def("tail_ell_gamma1p", &DisplacementSpec::tail_ell_gamma1p)
        .def("sample",
             [](const DisplacementSpec& spec, std::size_t n, std::uint64_t seed) {
                 RngStream stream(seed, 0, 0);
                 std::vector<double> out(n);
                 for (auto& x : out) x = spec.sample(stream);
                 return out;
             },
             py::arg("n"), py::arg("seed") = 1)
        .def("tail_density_constants",
             [](const DisplacementSpec& spec) -> py::object {
                 const auto c = spec.tail_density_constants();
                 if (!c) return py::none();
                 py::dict d;
                 d["limit"] = c->limit;
                 d["sup"] = c->sup;
                 d["alpha"] = c->alpha;
                 return d;
             })
        .def("__repr__", &DisplacementSpec::to_string);

    m.def("simulate_family",
          [](const DisplacementSpec& f, double mm, std::uint64_t budget, std::uint64_t seed,
             double cutoff) {
              RngStream stream(seed, 0, 0);
              const FamilyResult fam = simulate_family(f, mm, budget, stream, cutoff);
              py::dict d;
              d["positions"] = fam.positions;
              d["total_count"] = fam.total_count;
              d["generations"] = fam.generations;
              d["censored"] = fam.censored;
              return d;
          },
          py::arg("displacement"), py::arg("m"), py::arg("budget"), py::arg("seed") = 1,
          py::arg("position_cutoff") = kNoCutoff);

    m.def("simulate_renewal_hawkes",
          [](const DisplacementSpec& f, double mm, double lambda, double horizon, double burn_in,
             std::uint64_t family_budget, std::uint64_t seed) {
              RenewalImmigrationSpec spec{f, mm, lambda, horizon, burn_in, family_budget};
              RngStream stream(seed, 0, 0);
              const RenewalHawkesResult res = simulate_renewal_hawkes(spec, stream);
              py::dict d;
              d["points"] = std::vector<double>(res.points.points().begin(), res.points.points().end());
              d["window"] = py::make_tuple(res.points.window().lo, res.points.window().hi);
              d["immigrants_in_window"] = res.immigrants_in_window;
              d["censored_families"] = res.censored_families;
              d["interarrival_mean"] = res.interarrival_mean;
              return d;
          },
          py::arg("displacement"), py::arg("m"), py::arg("target_lambda"), py::arg("horizon"),
          py::arg("burn_in") = 0.0, py::arg("family_budget") = 1'000'000, py::arg("seed") = 1);

    m.def("renewal_function",
          [](const DisplacementSpec& f, double h, double x_max) {
              return grid_to_dict(renewal_function(GridMeasure::from_distribution(f, h, x_max), x_max));
          },
          py::arg("displacement"), py::arg("h"), py::arg("x_max"));

    m.def("two_index_mean",
          [](double alpha1, double ell1, double alpha2, double ell2, double h, double x_max) {
              const GridMeasure f1 =
                  GridMeasure::from_distribution(pareto_for_tail(TailSpec{alpha1, ell1}), h, x_max);
              const GridMeasure f2 =
                  GridMeasure::from_distribution(pareto_for_tail(TailSpec{alpha2, ell2}), h, x_max);
              return grid_to_dict(two_index_mean(f1, f2, x_max));
          },
          py::arg("alpha1"), py::arg("ell1"), py::arg("alpha2"), py::arg("ell2"), py::arg("h"),
          py::arg("x_max"));

    m.def("palm_mean_measure",
          [](const DisplacementSpec& f, double h, double x_max) {
              return grid_to_dict(palm_mean_measure(GridMeasure::from_distribution(f, h, x_max), x_max));
          },
          py::arg("displacement"), py::arg("h"), py::arg("x_max"));

    m.def("palm_local_finiteness_scan",
          [](const std::vector<double>& alphas, const std::vector<double>& ranges, double h) {
              ScanOptions opts;
              if (!ranges.empty()) opts.ranges = ranges;
              opts.h = h;
              py::list out;
              for (const ScanEntry& e : palm_local_finiteness_scan(alphas, opts)) {
                  py::dict d;
                  d["alpha"] = e.alpha;
                  d["verdict"] = to_string(e.verdict);
                  d["values"] = e.values;
                  out.append(d);
              }
              return out;
          },
          py::arg("alphas"), py::arg("ranges") = std::vector<double>{}, py::arg("h") = 0.01);

    m.def("occupation_curve",
          [](const DisplacementSpec& base, std::uint64_t n_steps, double halfwidth,
             std::uint64_t replications, std::uint64_t seed) {
              WalkSpec spec{SymmetrizedSpec{base}, n_steps, halfwidth, replications};
              RngStream stream(seed, 0, 0);
              const OccupationCurve curve = occupation_curve(spec, stream);
              py::dict d;
              d["n"] = curve.checkpoints;
              d["mean_visits"] = curve.mean_visits;
              d["stderr"] = curve.stderr_visits;
              d["verdict"] = to_string(classify_transience(curve));
              d["tail_slope"] = occupation_tail_slope(curve);
              return d;
          },
          py::arg("displacement"), py::arg("n_steps") = 1 << 16, py::arg("halfwidth") = 1.0,
          py::arg("replications") = 200, py::arg("seed") = 1);

    m.def("grow_kesten",
          [](std::uint64_t node_budget, std::uint64_t seed) {
              RngStream stream(seed, 0, 0);
              const KestenTree tree = grow_kesten(node_budget, stream);
              py::dict d;
              std::vector<int> parents, depths;
              std::vector<bool> special;
              parents.reserve(tree.nodes.size());
              for (const GenealogyNode& n : tree.nodes) {
                  parents.push_back(n.parent);
                  depths.push_back(n.depth);
                  special.push_back(n.kind == NodeKind::special);
              }
              d["parent"] = parents;
              d["depth"] = depths;
              d["special"] = special;
              d["spine"] = tree.spine;
              d["truncated"] = tree.truncated;
              return d;
          },
          py::arg("node_budget"), py::arg("seed") = 1);

    m.def("simulate_inar",
          [](const std::vector<double>& alpha, double lambda, std::size_t n_steps,
             std::size_t burnin, std::uint64_t seed) {
              InarSpec spec{alpha, lambda, 0.0};
              RngStream stream(seed, 0, 0);
              const InarPath path = simulate_inar(spec, n_steps, burnin, stream);
              py::dict d;
              std::vector<std::int64_t> x(path.x.begin() + static_cast<std::ptrdiff_t>(path.prehistory),
                                          path.x.end());
              d["x"] = x;
              d["u"] = innovations(path, spec);
              d["total_events"] = path.total_events;
              return d;
          },
          py::arg("alpha"), py::arg("lambda_"), py::arg("n_steps"), py::arg("burnin") = 0,
          py::arg("seed") = 1);

    m.def("symmetrized_lattice_step", [](const std::vector<double>& alpha) {
        InarSpec spec{alpha, 1.0, 0.0};
        std::int64_t k_min = 0;
        const std::vector<double> p = symmetrized_lattice_step(spec, k_min);
        return py::make_tuple(k_min, p);
    });

    m.def("run_config",
          [](const std::string& text, const std::string& out_dir, int threads) {
              ExperimentConfig cfg = parse_config_text(text);
              if (!out_dir.empty()) cfg.out = out_dir;
              RunOptions opt;
              opt.threads = threads;
              return run_experiment(cfg, opt).dump(2);
          },
          py::arg("text"), py::arg("out_dir") = "", py::arg("threads") = 0);

    m.attr("__version__") = kLabVersion;
}
