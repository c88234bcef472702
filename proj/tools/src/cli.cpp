#include "fsm_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "fsm/certify.hpp"
#include "fsm/densela.hpp"
#include "fsm/error.hpp"
#include "fsm/fsmap.hpp"
#include "fsm/helium.hpp"
#include "fsm/quadrature.hpp"

#ifndef FSM_LEBEDEV_DIR
#define FSM_LEBEDEV_DIR "data/lebedev"
#endif

namespace fsm::cli {

namespace {

struct ProblemArgs {
  std::string h0_path;
  std::string w_path;
  std::optional<int> lam0_index;
  std::optional<double> lam0_value;
  double cluster_tol = 1e-9;
  double a = 0.1;
  double b = 0.8;
  bool force = false;
  bool check = false;
};

struct QuadArgs {
  int index = 3;
  std::string sphere = "product";
  std::string lebedev_dir = FSM_LEBEDEV_DIR;
  std::optional<int> nr;
  std::optional<double> rmax;
  int threads = 1;
  int max_index = 5;
  bool allow_large = false;
  std::string ordering = "shell";
};

struct OutputArgs {
  bool csv = false;
  std::string path;
};

struct HeliumArgs {
  double z = 0.0;
  std::string symmetry = "sym";
  std::string rounding = "paper";
};

// Raised for argument combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NoConvergence:
    case ErrorCode::LeftTrustRegion:
    case ErrorCode::ResolventSingular:
      return kSolverFailed;
    case ErrorCode::InvalidCertificate:
      return kCertificationFailed;
    default:
      return kInputError;
  }
}

void add_problem_options(CLI::App& cmd, ProblemArgs& p) {
  cmd.add_option("--h0", p.h0_path, "Unperturbed operator H0 (matrix file)")->required()->check(CLI::ExistingFile);
  cmd.add_option("--w", p.w_path, "Perturbation W (matrix file)")->required()->check(CLI::ExistingFile);
  auto* idx = cmd.add_option("--lam0-index", p.lam0_index, "Select the i-th distinct eigenvalue of H0 (1-based)")
                  ->check(CLI::PositiveNumber);
  auto* val = cmd.add_option("--lam0-value", p.lam0_value, "Select the eigenvalue cluster of H0 nearest this value");
  idx->excludes(val);
  cmd.add_option("--cluster-tol", p.cluster_tol, "Relative tolerance for merging eigenvalues of H0")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--a", p.a, "Condition parameter a")->capture_default_str();
  cmd.add_option("--b", p.b, "Condition parameter b")->capture_default_str();
}

void add_quad_options(CLI::App& cmd, QuadArgs& q) {
  cmd.add_option("--index", q.index, "Quadrature parameter row (1..12)")->capture_default_str()->check(CLI::Range(1, 12));
  cmd.add_option("--sphere", q.sphere, "product | product:L | lebedev | lebedev:PATH")->capture_default_str();
  cmd.add_option("--lebedev-dir", q.lebedev_dir, "Directory of bundled Lebedev rules")->capture_default_str();
  cmd.add_option("--nr", q.nr, "Override the radial point count")->check(CLI::Range(2, 1000000));
  cmd.add_option("--rmax", q.rmax, "Override the outer radius");
  cmd.add_option("--threads", q.threads, "Worker threads for the convolution")->capture_default_str()->check(CLI::Range(1, 1024));
  cmd.add_option("--max-index", q.max_index, "Largest index run without --allow-large")->capture_default_str()
      ->check(CLI::Range(1, 12));
  cmd.add_flag("--allow-large", q.allow_large, "Permit indices above --max-index");
  cmd.add_option("--direct-ordering", q.ordering, "Density convolved in direct integrals: shell | ground")
      ->capture_default_str()
      ->check(CLI::IsMember({"shell", "ground"}));
}

helium::DirectOrdering ordering_of(const QuadArgs& q) {
  return q.ordering == "ground" ? helium::DirectOrdering::convolve_ground : helium::DirectOrdering::convolve_shell;
}

void add_output_options(CLI::App& cmd, OutputArgs& o) {
  cmd.add_flag("--csv", o.csv, "Emit CSV instead of text");
  cmd.add_option("--out", o.path, "Write output to this file");
}

PerturbationProblem load_problem(const ProblemArgs& p) {
  la::SymMatrix h0 = la::read_matrix_file(p.h0_path);
  la::SymMatrix w = la::read_matrix_file(p.w_path);
  if (p.lam0_value) return PerturbationProblem::from_value(std::move(h0), std::move(w), *p.lam0_value, p.cluster_tol);
  const int idx = p.lam0_index.value_or(1);
  return PerturbationProblem::from_index(std::move(h0), std::move(w), static_cast<std::size_t>(idx - 1),
                                         p.cluster_tol);
}

quad::Grid grid_for(const QuadArgs& q, int index) {
  if (index > q.max_index && !q.allow_large) {
    throw UsageError("index " + std::to_string(index) + " exceeds --max-index " + std::to_string(q.max_index) +
                     "; the convolution cost grows with the square of the grid size (pass --allow-large)");
  }
  quad::GridSpec spec = quad::table2_spec(index, q.sphere, q.lebedev_dir);
  if (q.nr) spec.n_r = *q.nr;
  if (q.rmax) spec.r_max = *q.rmax;
  return quad::build_grid(spec);
}

std::string grid_label(const QuadArgs& q, int index, const quad::Grid& g) {
  const quad::GridSpec spec = quad::table2_spec(index, q.sphere, q.lebedev_dir);
  std::ostringstream s;
  s << "index=" << index << " N_r=" << (q.nr ? *q.nr : spec.n_r) << " R_max=" << (q.rmax ? *q.rmax : spec.r_max)
    << " sphere=" << spec.sphere.label << " points=" << g.size();
  return s.str();
}

int cmd_certify(const ProblemArgs& p, std::ostream& out) {
  const PerturbationProblem prob = load_problem(p);
  const Certificate cert = check_conditions(prob, CertifyParams::make(p.a, p.b));
  write_certificate(out, cert);
  return cert.valid() ? kOk : kCertificationFailed;
}

int cmd_solve(const ProblemArgs& p, const OutputArgs& o, std::ostream& out, std::ostream& err) {
  const PerturbationProblem prob = load_problem(p);
  const Certificate cert = check_conditions(prob, CertifyParams::make(p.a, p.b));
  if (!cert.valid() && !p.force) {
    err << "certificate invalid; pass --force to solve anyway\n";
    write_certificate(err, cert);
    return kCertificationFailed;
  }
  const FixedPointOptions opts = fixed_point_options(cert, p.force);
  la::Vector truth;
  if (p.check) truth = la::sym_eig(prob.h()).values;

  const char sep = o.csv ? ',' : ' ';
  out << std::setprecision(12);
  if (o.csv) {
    out << "i,lam_i,iterations,residual,interval_low,interval_high,brute_force_lam,in_interval\n";
  } else {
    out << "# lam0=" << prob.lam0() << " m=" << prob.m() << " gam0=" << prob.gam0()
        << " valid=" << (cert.valid() ? "true" : "false") << '\n';
    out << "# i lam_i iterations residual interval_low interval_high brute_force_lam in_interval\n";
  }
  bool failed = false;
  for (std::size_t i = 1; i <= prob.m(); ++i) {
    try {
      const BranchSolution s = solve_fixed_point(prob, i, opts);
      out << i << sep << s.lam << sep << s.iterations << sep << s.residual << sep << cert.eig_interval.lo << sep
          << cert.eig_interval.hi << sep;
      if (p.check) {
        const auto nearest = std::min_element(truth.begin(), truth.end(), [&](double x, double y) {
          return std::abs(x - s.lam) < std::abs(y - s.lam);
        });
        out << *nearest;
      } else if (!o.csv) {
        out << '-';
      }
      out << sep << (cert.eig_interval.contains(s.lam) ? "true" : "false") << '\n';
    } catch (const Error& e) {
      failed = true;
      err << "branch " << i << ": " << e.what() << '\n';
    }
  }
  return failed ? kSolverFailed : kOk;
}

void print_constants(std::ostream& out, const helium::HeliumConstants& c, const helium::PairMatrices& pm,
                     const std::string& label) {
  out << std::setprecision(12);
  out << "grid " << label << '\n'
      << "w1=" << c.w1 << '\n'
      << "w2=" << c.w2 << '\n'
      << "w1_as=" << c.w1_as << '\n'
      << "w2_as=" << c.w2_as << '\n';
  out << "M_diag=";
  for (std::size_t i = 0; i < 4; ++i) out << (i ? "," : "") << pm.M(i, i);
  out << '\n';
}

int cmd_helium_constants(const QuadArgs& q, const OutputArgs& o, std::ostream& out) {
  const quad::Grid grid = grid_for(q, q.index);
  const helium::FullResult res = helium::compute_all(grid, q.threads, ordering_of(q));
  if (o.csv) {
    helium::write_convergence_csv(out, {{q.index, grid.size(), res.constants}});
  } else {
    print_constants(out, res.constants, res.pairs, grid_label(q, q.index, grid));
  }
  return kOk;
}

helium::Symmetry parse_symmetry(const std::string& s) {
  return s == "antisym" ? helium::Symmetry::antisym : helium::Symmetry::sym;
}

helium::Rounding parse_rounding(const std::string& s) {
  return s == "full" ? helium::Rounding::full : helium::Rounding::paper;
}

helium::HeliumConstants constants_for(const QuadArgs& q, helium::Rounding rounding) {
  if (rounding == helium::Rounding::paper) return helium::rounded_constants();
  return helium::compute_all(grid_for(q, q.index), q.threads, ordering_of(q)).constants;
}

int cmd_helium_bounds(const HeliumArgs& h, const QuadArgs& q, const OutputArgs& o, std::ostream& out) {
  const helium::Rounding rounding = parse_rounding(h.rounding);
  const helium::EnergyEnclosure e =
      helium::energy_bounds(h.z, parse_symmetry(h.symmetry), constants_for(q, rounding), rounding);
  out << std::setprecision(12);
  if (o.csv) {
    out << "z,symmetry,rounding,lower,upper,c,gam0,w1,w2,k,z_min,z_valid\n"
        << e.z << ',' << helium::to_string(e.symmetry) << ',' << helium::to_string(rounding) << ',' << e.lower << ','
        << e.upper << ',' << e.c << ',' << e.gam0 << ',' << e.w1 << ',' << e.w2 << ',' << e.k << ',' << e.z_min
        << ',' << (e.z_valid ? "true" : "false") << '\n';
  } else {
    out << "z=" << e.z << " symmetry=" << helium::to_string(e.symmetry) << " rounding=" << helium::to_string(rounding)
        << '\n'
        << "interval=[" << e.lower << ", " << e.upper << "]\n"
        << "c=" << e.c << " gam0=" << e.gam0 << " w1=" << e.w1 << " w2=" << e.w2 << " k=" << e.k << '\n'
        << "z_min=" << e.z_min << " z_valid=" << (e.z_valid ? "true" : "false") << '\n';
  }
  return kOk;
}

int cmd_helium_table1(const HeliumArgs& h, const QuadArgs& q, const OutputArgs& o, std::ostream& out) {
  const helium::Rounding rounding = parse_rounding(h.rounding);
  const auto rows = helium::table1(constants_for(q, rounding), rounding);
  if (o.csv) {
    helium::write_table1_csv(out, rows);
  } else {
    helium::write_table1_text(out, rows);
  }
  return kOk;
}

int cmd_helium_convergence(const QuadArgs& q, const OutputArgs& o, std::ostream& out, std::ostream& err) {
  std::vector<helium::ConvergenceRow> rows;
  for (int idx = 1; idx <= q.max_index; ++idx) {
    const quad::Grid grid = grid_for(q, idx);
    err << "index " << idx << ": " << grid.size() << " points\n";
    rows.push_back({idx, grid.size(), helium::compute_all(grid, q.threads, ordering_of(q)).constants});
  }
  if (o.csv) {
    helium::write_convergence_csv(out, rows);
    return kOk;
  }
  out << std::left << std::setw(7) << "index" << std::setw(8) << "points" << std::setw(16) << "w1" << std::setw(16)
      << "|w1-5/8|" << std::setw(16) << "w2" << std::setw(16) << "w1_as"
      << "w2_as\n"
      << std::setprecision(8);
  for (const auto& r : rows) {
    out << std::setw(7) << r.index << std::setw(8) << r.points << std::setw(16) << r.constants.w1 << std::setw(16)
        << std::abs(r.constants.w1 - 0.625) << std::setw(16) << r.constants.w2 << std::setw(16) << r.constants.w1_as
        << r.constants.w2_as << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feshbach-Schur perturbation bounds and two-electron ion constants", "fsm"};
  app.require_subcommand(1);

  ProblemArgs prob_args;
  QuadArgs quad_args;
  OutputArgs out_args;
  HeliumArgs he_args;

  auto* certify = app.add_subcommand("certify", "Check the perturbation conditions and print the certificate");
  add_problem_options(*certify, prob_args);
  certify->add_option("--out", out_args.path, "Write output to this file");

  auto* solve = app.add_subcommand("solve", "Solve the fixed-point equations for every branch");
  add_problem_options(*solve, prob_args);
  add_output_options(*solve, out_args);
  solve->add_flag("--force", prob_args.force, "Solve even if the certificate is invalid");
  solve->add_flag("--check", prob_args.check, "Compare with a direct eigensolve of H0 + W");

  auto* helium = app.add_subcommand("helium", "Two-electron ion constants and energy bounds");
  helium->require_subcommand(1);
  auto* constants = helium->add_subcommand("constants", "Compute w1, w2, w1_as, w2_as by quadrature");
  add_quad_options(*constants, quad_args);
  add_output_options(*constants, out_args);

  auto* bounds = helium->add_subcommand("bounds", "Ground-state energy enclosure for one z");
  bounds->add_option("--z", he_args.z, "Nuclear charge")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--symmetry", he_args.symmetry, "sym | antisym")->capture_default_str()
      ->check(CLI::IsMember({"sym", "antisym"}));
  bounds->add_option("--rounding", he_args.rounding, "paper | full")->capture_default_str()->check(CLI::IsMember({"paper", "full"}));
  add_quad_options(*bounds, quad_args);
  add_output_options(*bounds, out_args);

  auto* table = helium->add_subcommand("table1", "Leading-order energies against reference values");
  table->add_option("--rounding", he_args.rounding, "paper | full")->capture_default_str()->check(CLI::IsMember({"paper", "full"}));
  add_quad_options(*table, quad_args);
  add_output_options(*table, out_args);

  auto* convergence = helium->add_subcommand("convergence", "Constants for indices 1..--max-index");
  add_quad_options(*convergence, quad_args);
  add_output_options(*convergence, out_args);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  std::ostringstream buffer;
  int code = kOk;
  try {
    if (*certify) {
      code = cmd_certify(prob_args, buffer);
    } else if (*solve) {
      code = cmd_solve(prob_args, out_args, buffer, err);
    } else if (*constants) {
      code = cmd_helium_constants(quad_args, out_args, buffer);
    } else if (*bounds) {
      code = cmd_helium_bounds(he_args, quad_args, out_args, buffer);
    } else if (*table) {
      code = cmd_helium_table1(he_args, quad_args, out_args, buffer);
    } else if (*convergence) {
      code = cmd_helium_convergence(quad_args, out_args, buffer, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  if (out_args.path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(out_args.path);
    if (!file) {
      err << "error: cannot write " << out_args.path << '\n';
      return kInputError;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace fsm::cli
