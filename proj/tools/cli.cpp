#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "sixvertex/asymptotics.hpp"
#include "sixvertex/error.hpp"
#include "sixvertex/exactcore.hpp"
#include "sixvertex/oracle.hpp"
#include "sixvertex/specfun.hpp"

namespace sixv::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view text, const char* what) {
  const std::string s = trim(text);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw InvalidInput(std::string("bad ") + what + " '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split_dots(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find("..", start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(text.substr(start)));
      return parts;
    }
    parts.push_back(trim(text.substr(start, pos - start)));
    start = pos + 2;
  }
}

// Significant digits used for high-precision output at a given precision.
int output_digits(unsigned bits) {
  return std::max(6, static_cast<int>(std::floor((static_cast<double>(bits) - 8) * 0.30102999566398120)));
}

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string label(const PhaseParams& pp) {
  return std::string(phase_tag(pp.phase())) + " gamma=" + short_num(pp.gamma().to_double()) +
         " t=" + short_num(pp.t().to_double());
}

// Result slot of one task: rows plus free-form notes, merged in task order.
struct Chunk {
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
  bool pass = true;
};

template <class R>
std::vector<R> parallel_map(std::size_t n, int jobs, const std::function<R(std::size_t)>& fn) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

void merge(Table& table, std::vector<Chunk>&& chunks) {
  for (auto& c : chunks) {
    for (auto& r : c.rows) table.rows.push_back(std::move(r));
    for (auto& s : c.notes) table.notes.push_back(std::move(s));
    table.all_pass = table.all_pass && c.pass;
  }
}

struct Context {
  const RunConfig& cfg;
  Precision p;
  int digits;
  std::string hp(const Real& x) const { return x.to_string(digits); }
};

std::vector<PhaseParams> build_points(const RunConfig& cfg, Precision p) {
  if (cfg.phase.empty()) throw InvalidInput("--phase is required");
  const Phase phase = parse_phase(cfg.phase);
  if (cfg.gamma.empty()) throw InvalidInput("--gamma is required");
  if (!cfg.t.empty() && !cfg.zeta.empty()) throw InvalidInput("give either --t or --zeta, not both");
  if (cfg.t.empty() && cfg.zeta.empty()) throw InvalidInput("one of --t or --zeta is required");
  const auto gammas = parse_grid(cfg.gamma, p);
  const bool by_zeta = !cfg.zeta.empty();
  const auto values = parse_grid(by_zeta ? cfg.zeta : cfg.t, p);
  std::vector<PhaseParams> points;
  for (const auto& g : gammas)
    for (const auto& v : values) points.push_back(by_zeta ? PhaseParams::from_zeta(phase, v, g) : PhaseParams(phase, v, g));
  return points;
}

std::pair<int, int> n_range_or(const RunConfig& cfg, std::pair<int, int> fallback, int min_n) {
  const auto r = cfg.n.empty() ? fallback : parse_n_range(cfg.n);
  if (r.first < min_n) throw InvalidInput("--n must start at " + std::to_string(min_n) + " or above");
  return r;
}

std::vector<Cell> param_cells(const PhaseParams& pp) {
  return {std::string(phase_tag(pp.phase())), pp.gamma().to_double(), pp.t().to_double()};
}

// ---------------------------------------------------------------- exact

Table cmd_exact(const Context& ctx) {
  const auto points = build_points(ctx.cfg, ctx.p);
  if (ctx.cfg.n.empty()) throw InvalidInput("--n is required");
  const auto [n0, n1] = n_range_or(ctx.cfg, {1, 1}, 1);
  Table t;
  t.columns = {"phase", "gamma", "t", "N", "log_tau_scaled", "Z", "log_Z_over_N2"};
  t.notes = {"log_tau_scaled = log(tau_N/c_N), c_N = prod_{k=0}^{N-1} (k!)^2",
             "Z = (ab)^(N^2) tau_N/c_N", "log_Z_over_N2 = log(Z_N)/N^2"};
  const std::size_t per = static_cast<std::size_t>(n1 - n0 + 1);
  auto chunks = parallel_map<Chunk>(points.size() * per, ctx.cfg.jobs, [&](std::size_t i) {
    const auto& pp = points[i / per];
    const int n = n0 + static_cast<int>(i % per);
    const TauValue tv = tau_scaled(pp, n, ctx.p);
    const Weights w = weights_from(pp, ctx.p);
    const Real log_ab = log(w.a * w.b);
    const Real Z = pow(w.a * w.b, static_cast<long>(n) * n) * tv.scaled_tau;
    auto row = param_cells(pp);
    row.insert(row.end(), {static_cast<long>(n), ctx.hp(tv.log_scaled), ctx.hp(Z),
                           ctx.hp(log_ab + tv.log_scaled / (static_cast<long>(n) * n))});
    return Chunk{{row}, {}, true};
  });
  merge(t, std::move(chunks));
  return t;
}

// ---------------------------------------------------------------- check

struct CheckRow {
  std::string name;
  std::string what;
  double residual;
  double tolerance;
};

Chunk check_chunk(std::vector<CheckRow> rows) {
  Chunk c;
  for (auto& r : rows) {
    const bool ok = std::isfinite(r.residual) && r.residual < r.tolerance;
    c.pass = c.pass && ok;
    c.rows.push_back({r.name, r.what, r.residual, r.tolerance, std::string(ok ? "pass" : "fail")});
  }
  return c;
}

double to_d(const Real& x) { return x.to_double(); }

std::vector<PhaseParams> oracle_default_points(Precision p) {
  auto mk = [&](Phase ph, const char* t, const char* g) { return PhaseParams(ph, Real::parse(t, p), Real::parse(g, p)); };
  return {mk(Phase::ferroelectric, "1.5", "0.4"),    mk(Phase::ferroelectric, "0.9", "0.35"),
          mk(Phase::disordered, "0.3", "1"),         mk(Phase::disordered, "-0.2", "0.6"),
          mk(Phase::antiferroelectric, "0.3", "1"),  mk(Phase::antiferroelectric, "-0.5", "0.8")};
}

Table cmd_check(const Context& ctx) {
  const std::string& name = ctx.cfg.check;
  const Precision p = ctx.p;
  const int jobs = ctx.cfg.jobs;
  static const std::vector<std::string> known{"toda", "oracle", "identities", "laplace",
                                               "dfdzeta", "chem", "ode", "discrete"};
  if (std::find(known.begin(), known.end(), name) == known.end())
    throw InvalidInput("unknown check '" + name +
                       "' (expected toda, oracle, identities, laplace, dfdzeta, chem, ode or discrete)");
  Table t;
  t.columns = {"check", "case", "residual", "tolerance", "status"};
  std::vector<Chunk> chunks;

  if (name == "identities") {
    std::vector<CheckRow> rows;
    for (const auto& r : specfun::identity_suite(p)) rows.push_back({name, r.name, to_d(r.residual), to_d(r.tolerance)});
    chunks.push_back(check_chunk(rows));
  } else if (name == "oracle") {
    const auto points = ctx.cfg.phase.empty() ? oracle_default_points(p) : build_points(ctx.cfg, p);
    const auto [n0, n1] = n_range_or(ctx.cfg, {1, 5}, 1);
    if (n1 > kMaxEnumerationN) throw InvalidInput("oracle enumeration supports N <= " + std::to_string(kMaxEnumerationN));
    const double tol = std::ldexp(1.0, -static_cast<int>(p.bits) / 2);
    t.notes.push_back("residual = |Z_det - Z_enum| / Z_enum");
    for (int n = n0; n <= n1; ++n) {
      const EnumResult e = enumerate_dwbc(n);
      auto part = parallel_map<Chunk>(points.size(), jobs, [&](std::size_t i) {
        const auto& pp = points[i];
        const Weights w = weights_from(pp, p);
        const Real zd = partition_Z(pp, n, p);
        const Real ze = Z_bruteforce(e, w.a, w.b, w.c, p);
        return check_chunk({{name, label(pp) + " N=" + std::to_string(n), to_d(abs(zd - ze) / ze), tol}});
      });
      for (auto& c : part) chunks.push_back(std::move(c));
    }
  } else {
    const auto points = build_points(ctx.cfg, p);
    if (name == "toda" || name == "discrete") {
      const auto [n0, n1] = n_range_or(ctx.cfg, name == "toda" ? std::pair{1, 8} : std::pair{1, 4}, 1);
      const std::size_t per = static_cast<std::size_t>(n1 - n0 + 1);
      if (name == "toda") t.notes.push_back("residual = |T T'' - T'^2 - N^2 T_{N+1} T_{N-1}| / |N^2 T_{N+1} T_{N-1}|, T = tau_N/c_N");
      else t.notes.push_back("residual = |discrete sum - c_N tau_scaled| / (c_N tau_scaled); tolerance includes the tail bound");
      chunks = parallel_map<Chunk>(points.size() * per, jobs, [&](std::size_t i) {
        const auto& pp = points[i / per];
        const int n = n0 + static_cast<int>(i % per);
        const std::string what = label(pp) + " N=" + std::to_string(n);
        if (name == "toda") {
          const auto r = toda_residual(pp, n, p);
          return check_chunk({{name, what, to_d(r.relative), std::ldexp(1.0, -3 * static_cast<int>(p.bits) / 8)}});
        }
        const int cutoff = ctx.cfg.cutoff ? *ctx.cfg.cutoff : suggest_cutoff(pp, n, p);
        const auto s = tau_discrete_sum(pp, n, cutoff, p);
        const Real exact = tau_scaled(pp, n, p).scaled_tau * Real(barnes_square(n), p);
        const double tol = to_d(s.tail_bound / exact) + std::ldexp(1.0, -static_cast<int>(p.bits) / 2);
        return check_chunk({{name, what + " cutoff=" + std::to_string(s.cutoff), to_d(abs(s.tau - exact) / exact), tol}});
      });
    } else if (name == "laplace") {
      const auto [n0, n1] = n_range_or(ctx.cfg, {6, 6}, 0);
      (void)n0;
      t.notes.push_back("residual = max_i |moment_i - phi^(i)(t)| / max(1, |phi^(i)(t)|), i = 0..N");
      chunks = parallel_map<Chunk>(points.size(), jobs, [&](std::size_t i) {
        const auto m = laplace_moment_check(points[i], n1, p);
        double worst = 0;
        for (std::size_t k = 0; k < m.moments.size(); ++k)
          worst = std::max(worst, std::fabs(m.moments[k] - m.expected[k]) / std::max(1.0, std::fabs(m.expected[k])));
        return check_chunk({{name, label(points[i]) + " i_max=" + std::to_string(n1), worst, 1e-10}});
      });
    } else {
      if (name == "dfdzeta") t.notes.push_back("residual = |endpoint form - theta form| of df/dzeta (fe: df/dt)");
      if (name == "chem") t.notes.push_back("residual = |beta' - (beta - beta') sn/(cn dn) Z(u_inf)|");
      if (name == "ode") t.notes.push_back("fe, d: f'' = e^{2f} in t; af: Toda residual of the theta_4-modulated Ansatz at N = 6");
      chunks = parallel_map<Chunk>(points.size(), jobs, [&](std::size_t i) {
        const auto& pp = points[i];
        if (name == "dfdzeta") {
          const auto d = dfdzeta(pp, p);
          return check_chunk({{name, label(pp), to_d(abs(d.endpoint_form - d.theta_form)), 1e-8}});
        }
        if (name == "chem") return check_chunk({{name, label(pp), to_d(abs(chem_residual(endpoints(pp, p)))), 1e-8}});
        const double tol = pp.phase() == Phase::antiferroelectric ? 1e-6 : 1e-10;
        return check_chunk({{name, label(pp), to_d(ode_check(pp, p)), tol}});
      });
    }
  }
  merge(t, std::move(chunks));
  long passed = 0;
  for (const auto& r : t.rows) passed += std::get<std::string>(r[4]) == "pass";
  t.notes.push_back("passed " + std::to_string(passed) + " of " + std::to_string(t.rows.size()));
  return t;
}

// ---------------------------------------------------------------- bulk

Table cmd_bulk(const Context& ctx) {
  const auto points = build_points(ctx.cfg, ctx.p);
  Table t;
  t.columns = {"phase", "gamma", "t", "zeta", "f", "F", "z_limit", "alpha", "alpha_prime", "beta_prime", "beta",
               "F_modular", "f_small_gamma"};
  t.notes = {"f = lim log(tau_N/c_N)/N^2, F = -log(ab) - f, z_limit = lim Z_N^(1/N^2)",
             "fe: support [0, beta] saturated on [0, alpha] in the variable of t - gamma; d: [alpha, beta]; "
             "af: [alpha, beta] saturated on [alpha_prime, beta_prime]",
             "F_modular and f_small_gamma: af series forms, empty when not converged within m_max"};
  auto chunks = parallel_map<Chunk>(points.size(), ctx.cfg.jobs, [&](std::size_t i) {
    const auto& pp = points[i];
    const auto fe = bulk_f(pp, ctx.p);
    const auto g = endpoints(pp, ctx.p);
    const bool af = pp.phase() == Phase::antiferroelectric;
    Chunk c;
    std::string fm, fs;
    if (af) {
      try {
        fm = ctx.hp(F_modular(pp, ctx.cfg.m_max, ctx.p).F);
      } catch (const ConvergenceError& e) {
        c.notes.push_back(label(pp) + ": " + e.what());
      }
      try {
        fs = ctx.hp(f_small_gamma(pp, ctx.cfg.m_max, ctx.p).f_series);
      } catch (const ConvergenceError& e) {
        c.notes.push_back(label(pp) + ": " + e.what());
      }
    }
    auto row = param_cells(pp);
    row.insert(row.end(), {pp.zeta().to_double(), ctx.hp(fe.f), ctx.hp(fe.F), ctx.hp(fe.z_limit), ctx.hp(g.alpha),
                           af ? ctx.hp(g.alpha_prime) : std::string(), af ? ctx.hp(g.beta_prime) : std::string(),
                           ctx.hp(g.beta), fm, fs});
    c.rows.push_back(std::move(row));
    return c;
  });
  merge(t, std::move(chunks));
  return t;
}

// ---------------------------------------------------------------- density

Table cmd_density(const Context& ctx) {
  const auto points = build_points(ctx.cfg, ctx.p);
  if (ctx.cfg.grid < 2) throw InvalidInput("--grid must be at least 2");
  Table t;
  t.columns = {"phase", "gamma", "t", "mu", "rho", "saturated"};
  t.notes = {"rho(mu) = -Im omega(mu + i0)/pi, unit mass; saturated = 1 inside a saturated interval"};
  auto chunks = parallel_map<Chunk>(points.size(), ctx.cfg.jobs, [&](std::size_t i) {
    const auto& pp = points[i];
    const auto g = endpoints(pp, ctx.p);
    const auto d = density(pp, g, ctx.cfg.grid, ctx.p);
    Chunk c;
    std::ostringstream note;
    note.precision(17);
    note << label(pp) << ": support [" << d.grid.front().first << ", " << d.grid.back().first << "]";
    for (const auto& [lo, hi] : d.saturated_intervals) note << ", saturated [" << lo << ", " << hi << "]";
    note << ", bound " << d.bound << ", mass " << d.mass << " (quadrature error " << d.mass_error << ")";
    c.notes.push_back(note.str());
    for (const auto& [mu, rho] : d.grid) {
      long sat = 0;
      for (const auto& [lo, hi] : d.saturated_intervals) sat |= (mu >= lo && mu <= hi);
      auto row = param_cells(pp);
      row.insert(row.end(), {mu, rho, sat});
      c.rows.push_back(std::move(row));
    }
    return c;
  });
  merge(t, std::move(chunks));
  return t;
}

// ---------------------------------------------------------------- fit

Table cmd_fit(const Context& ctx) {
  const auto points = build_points(ctx.cfg, ctx.p);
  const auto [n0, n1] = n_range_or(ctx.cfg, {2, 16}, 1);
  Table t;
  t.columns = {"phase", "gamma", "t", "N", "log_tau_scaled", "r_N", "r_N_control"};
  t.notes = {"log_tau_scaled = log(tau_N/c_N)",
             "af: r_N = log(tau_N/c_N) - N^2 f - log theta_4((pi/2)(1+zeta)N); r_N_control omits theta_4",
             "fe, d: r_N = log(tau_N/c_N) - N^2 f, fitted to kappa log N + const over sliding windows"};
  const std::size_t per = static_cast<std::size_t>(n1 - n0 + 1);
  auto taus = parallel_map<TauValue>(points.size() * per, ctx.cfg.jobs, [&](std::size_t i) {
    return tau_scaled(points[i / per], n0 + static_cast<int>(i % per), ctx.p);
  });
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pp = points[k];
    const TauSequence seq(taus.begin() + static_cast<long>(k * per), taus.begin() + static_cast<long>((k + 1) * per));
    const bool af = pp.phase() == Phase::antiferroelectric;
    std::vector<Real> r, rc;
    if (af) {
      const auto fit = subleading_AF_fit(seq, pp, ctx.p);
      const auto ctl = subleading_AF_control(seq, pp, ctx.p);
      r = fit.ratios;
      rc = ctl.ratios;
      std::ostringstream note;
      note << label(pp) << ": spread_high " << fit.spread_high << ", spread_low " << fit.spread_low
           << "; control spread_high " << ctl.spread_high << ", spread_low " << ctl.spread_low;
      t.notes.push_back(note.str());
    } else {
      const Real f = bulk_f(pp, ctx.p).f;
      for (const auto& tv : seq) r.push_back(tv.log_scaled - f * (static_cast<long>(tv.n) * tv.n));
      if (static_cast<int>(seq.size()) >= ctx.cfg.window) {
        for (const auto& pf : smooth_power_fit(seq, pp, ctx.cfg.window, ctx.p)) {
          std::ostringstream note;
          note << label(pp) << ": N=" << pf.n_first << ".." << pf.n_last << " kappa " << pf.kappa << ", constant "
               << pf.constant << ", rms " << pf.rms;
          t.notes.push_back(note.str());
        }
      }
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      auto row = param_cells(pp);
      row.insert(row.end(), {static_cast<long>(seq[i].n), ctx.hp(seq[i].log_scaled), ctx.hp(r[i]),
                             af ? ctx.hp(rc[i]) : std::string()});
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render(const Cell& c) {
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, res.ptr);
  }
  return std::get<std::string>(c);
}

}  // namespace

// ---------------------------------------------------------------- parsing

Real parse_value(std::string_view text, Precision p) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidInput("empty numeric value");
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return Real::parse(s, p);
  bool neg = false;
  std::string head = s.substr(0, pos);
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    neg = head[0] == '-';
    head.erase(0, 1);
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  Real v = Real::pi(p);
  if (!head.empty()) v *= Real::parse(head, p);
  const std::string tail = s.substr(pos + 2);
  if (!tail.empty()) {
    if (tail[0] != '/') throw InvalidInput("bad numeric value '" + s + "'");
    const Real d = Real::parse(tail.substr(1), p);
    if (d.is_zero()) throw InvalidInput("division by zero in '" + s + "'");
    v /= d;
  }
  return neg ? -v : v;
}

std::vector<Real> parse_grid(std::string_view text, Precision p) {
  const auto parts = split_dots(text);
  if (parts.size() == 1) return {parse_value(parts[0], p)};
  if (parts.size() != 3) throw InvalidInput("range must be lo..hi..step, got '" + std::string(text) + "'");
  const Real lo = parse_value(parts[0], p), hi = parse_value(parts[1], p), step = parse_value(parts[2], p);
  if (!(step > 0)) throw InvalidInput("range step must be positive in '" + std::string(text) + "'");
  if (hi < lo) throw InvalidInput("range upper end below lower end in '" + std::string(text) + "'");
  const double count = std::floor(((hi - lo) / step).to_double() + 1e-9);
  if (count > 1e6) throw InvalidInput("range has too many points");
  std::vector<Real> out;
  for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(lo + step * i);
  return out;
}

std::pair<int, int> parse_n_range(std::string_view text) {
  const auto parts = split_dots(text);
  if (parts.size() == 1) {
    const int n = parse_int(parts[0], "N");
    return {n, n};
  }
  if (parts.size() != 2) throw InvalidInput("N range must be n or lo..hi, got '" + std::string(text) + "'");
  const int lo = parse_int(parts[0], "N"), hi = parse_int(parts[1], "N");
  if (hi < lo) throw InvalidInput("N range upper end below lower end");
  return {lo, hi};
}

// ---------------------------------------------------------------- output

void write_csv(const Table& table, std::ostream& os) {
  os << "# command = " << table.command << ", bits = " << table.bits << "\n";
  for (const auto& n : table.notes) os << "# " << n << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(render(row[i]));
    os << "\n";
  }
}

void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json j;
  j["command"] = table.command;
  j["bits"] = table.bits;
  j["notes"] = table.notes;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { r[table.columns[i]] = v; }, row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

Table execute(const RunConfig& cfg) {
  if (cfg.bits < 64) throw InvalidInput("--bits must be at least 64");
  if (cfg.jobs < 1) throw InvalidInput("--jobs must be at least 1");
  if (cfg.format != "csv" && cfg.format != "json") throw InvalidInput("--format must be csv or json");
  const Context ctx{cfg, Precision{cfg.bits}, output_digits(cfg.bits)};
  Table t;
  if (cfg.command == "exact") t = cmd_exact(ctx);
  else if (cfg.command == "check") t = cmd_check(ctx);
  else if (cfg.command == "bulk") t = cmd_bulk(ctx);
  else if (cfg.command == "density") t = cmd_density(ctx);
  else if (cfg.command == "fit") t = cmd_fit(ctx);
  else if (cfg.command.empty()) throw InvalidInput("no command given (exact, check, bulk, density, fit)");
  else throw InvalidInput("unknown command '" + cfg.command + "'");
  t.command = cfg.command == "check" ? "check " + cfg.check : cfg.command;
  t.bits = cfg.bits;
  return t;
}

// ---------------------------------------------------------------- driver

namespace {

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw InvalidInput("config key '" + key + "' must be a string or number");
}

int json_int(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) return parse_int(v.get<std::string>(), key.c_str());
  throw InvalidInput("config key '" + key + "' must be an integer");
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config file must hold a JSON object");
  const std::map<std::string, std::function<void(const nlohmann::json&, const std::string&)>> setters{
      {"command", [&](auto& v, auto& k) { cfg.command = json_scalar(v, k); }},
      {"check", [&](auto& v, auto& k) { cfg.check = json_scalar(v, k); }},
      {"phase", [&](auto& v, auto& k) { cfg.phase = json_scalar(v, k); }},
      {"gamma", [&](auto& v, auto& k) { cfg.gamma = json_scalar(v, k); }},
      {"t", [&](auto& v, auto& k) { cfg.t = json_scalar(v, k); }},
      {"zeta", [&](auto& v, auto& k) { cfg.zeta = json_scalar(v, k); }},
      {"n", [&](auto& v, auto& k) { cfg.n = json_scalar(v, k); }},
      {"bits", [&](auto& v, auto& k) { cfg.bits = static_cast<unsigned>(std::max(0, json_int(v, k))); }},
      {"format", [&](auto& v, auto& k) { cfg.format = json_scalar(v, k); }},
      {"out", [&](auto& v, auto& k) { cfg.out = json_scalar(v, k); }},
      {"jobs", [&](auto& v, auto& k) { cfg.jobs = json_int(v, k); }},
      {"grid", [&](auto& v, auto& k) { cfg.grid = json_int(v, k); }},
      {"cutoff", [&](auto& v, auto& k) { cfg.cutoff = json_int(v, k); }},
      {"window", [&](auto& v, auto& k) { cfg.window = json_int(v, k); }},
      {"m_max", [&](auto& v, auto& k) { cfg.m_max = json_int(v, k); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw InvalidInput("unknown config key '" + key + "'");
    it->second(value, key);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Six-vertex model with domain wall boundary conditions: exact partition functions, "
               "large-N asymptotics and cross-checks."};
  app.name("sixvertex");
  RunConfig flags;
  std::string bits_text, cutoff_text, config_path;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto str_opt = [&](const char* name, std::string RunConfig::*field, const char* help) {
    auto* o = app.add_option(name, flags.*field, help)->allow_extra_args(false);
    overrides.emplace_back(o, [&flags, field](RunConfig& c) { c.*field = flags.*field; });
  };
  auto int_opt = [&](const char* name, int RunConfig::*field, const char* help) {
    auto* o = app.add_option(name, flags.*field, help);
    overrides.emplace_back(o, [&flags, field](RunConfig& c) { c.*field = flags.*field; });
  };
  str_opt("--phase", &RunConfig::phase, "fe, d or af");
  str_opt("--gamma", &RunConfig::gamma, "gamma: value or lo..hi..step; decimals or multiples of pi (pi/3)");
  str_opt("--t", &RunConfig::t, "t: value or lo..hi..step");
  str_opt("--zeta", &RunConfig::zeta, "zeta = t/gamma: value or lo..hi..step");
  str_opt("--n", &RunConfig::n, "N or lo..hi");
  str_opt("--format", &RunConfig::format, "csv or json");
  str_opt("--out", &RunConfig::out, "output path (default stdout)");
  int_opt("--jobs", &RunConfig::jobs, "worker threads");
  int_opt("--grid", &RunConfig::grid, "density samples");
  int_opt("--window", &RunConfig::window, "power-fit window (fe, d)");
  int_opt("--m-max", &RunConfig::m_max, "maximum terms of the af series forms");
  auto* bits_opt = app.add_option("--bits", bits_text, "binary precision (default $SIXV_BITS or 256)");
  auto* cutoff_opt = app.add_option("--cutoff", cutoff_text, "eigenvalue cutoff for check discrete");
  auto* config_opt = app.add_option("--config", config_path, "JSON file with the same keys as the flags");

  app.require_subcommand(0, 1);
  app.add_subcommand("exact", "tau_N/c_N and Z_N over an N range")->fallthrough();
  auto* check = app.add_subcommand("check", "named cross-check; exit code 0 iff all pass")->fallthrough();
  std::string check_name;
  auto* check_pos = check->add_option("name", check_name,
                                      "toda, oracle, identities, laplace, dfdzeta, chem, ode or discrete");
  app.add_subcommand("bulk", "free energies and endpoints over a parameter grid")->fallthrough();
  app.add_subcommand("density", "eigenvalue density profile")->fallthrough();
  app.add_subcommand("fit", "subleading ratios r_N over an N range")->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  RunConfig cfg;
  std::unique_ptr<std::ofstream> file;
  try {
    if (const char* env = std::getenv("SIXV_BITS"); env != nullptr && *env != '\0') {
      const int b = parse_int(env, "SIXV_BITS");
      if (b < 64) throw InvalidInput("SIXV_BITS must be at least 64");
      cfg.bits = static_cast<unsigned>(b);
    }
    if (config_opt->count() > 0) apply_config_file(config_path, cfg);
    for (auto& [opt, set] : overrides)
      if (opt->count() > 0) set(cfg);
    if (bits_opt->count() > 0) {
      const int b = parse_int(bits_text, "--bits");
      if (b < 64) throw InvalidInput("--bits must be at least 64");
      cfg.bits = static_cast<unsigned>(b);
    }
    if (cutoff_opt->count() > 0) cfg.cutoff = parse_int(cutoff_text, "--cutoff");
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (check_pos->count() > 0) cfg.check = check_name;
    if (cfg.command == "check" && cfg.check.empty()) throw InvalidInput("check needs a name");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  Table table;
  try {
    table = execute(cfg);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const PhaseDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return kComputeFailure;
  }

  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file = std::make_unique<std::ofstream>(cfg.out);
    if (!*file) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return kComputeFailure;
    }
    os = file.get();
  }
  if (cfg.format == "json") write_json(table, *os);
  else write_csv(table, *os);
  os->flush();
  if (!*os) {
    err << "error: write failed\n";
    return kComputeFailure;
  }
  if (table.command.rfind("check", 0) == 0 && !table.all_pass) {
    err << "check failed\n";
    return kComputeFailure;
  }
  return kOk;
}

}  // namespace sixv::cli
