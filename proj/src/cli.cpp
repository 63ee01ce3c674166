#include "kncond/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kncond/cond_entropies.hpp"
#include "kncond/csv.hpp"
#include "kncond/entropies.hpp"
#include "kncond/error.hpp"
#include "kncond/frameworks.hpp"
#include "kncond/properties.hpp"
#include "kncond/text_syntax.hpp"
#include "kncond/vulnerability.hpp"

namespace kncond {

namespace {

using nlohmann::json;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitProperty = 4;

struct Options {
  std::string dist;
  std::string dist_file;
  std::string joint;
  std::string channel;
  std::string prior;
  std::vector<std::string> measures;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::vector<double> alphas;
  std::string alpha_range;
  std::string phi = "identity";
  std::string psi = "identity";
  std::string gain = "soft01";
  std::string framework;
  std::string core;
  std::string property;
  std::size_t restarts = 8;
  std::size_t max_iters = 10000;
  double tol = 1e-12;
  double floor = 1e-12;
  double step = 0.1;
  std::string method = "eg";
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::optional<double> check_tol;
  double slack = 1e-4;
  std::string p0 = "0.9,0.1";
  std::string format;
  bool json_out = false;
  bool wide = false;
};

enum class Format { table, json, csv };

Format output_format(const Options& o, Format fallback) {
  if (o.json_out) return Format::json;
  if (o.format.empty()) return fallback;
  if (o.format == "json") return Format::json;
  if (o.format == "csv") return Format::csv;
  if (o.format == "table") return Format::table;
  throw InputError("unknown format '" + o.format + "'");
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- config file ----------------------------------------------------------

const std::set<std::string> kFlagOptions = {"json", "wide"};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(path + ":" + std::to_string(n) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Removes every occurrence of the overridden options from args, then appends
// the config values so they take precedence over flags.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (path.empty()) return kept;
  const auto kv = read_config(path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::string& a = kept[i];
    if (a.rfind("--", 0) == 0) {
      const auto eq = a.find('=');
      const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
      if (kv.count(key)) {
        if (eq == std::string::npos && !kFlagOptions.count(key) && i + 1 < kept.size()) ++i;
        continue;
      }
    }
    out.push_back(a);
  }
  for (const auto& [k, v] : kv) out.push_back("--" + k + "=" + v);
  return out;
}

// ---- inputs ---------------------------------------------------------------

std::optional<Joint> load_joint(const Options& o) {
  std::string path = !o.joint.empty() ? o.joint : o.channel;
  if (path.empty()) return std::nullopt;
  ChannelFile f = read_channel_csv(path);
  std::optional<Dist> prior = f.prior;
  if (!o.prior.empty()) prior = parse_dist_text(o.prior);
  if (!prior) throw InputError("'" + path + "' has no prior column; pass --prior");
  return Joint(std::move(*prior), std::move(f.channel));
}

std::optional<Dist> load_dist(const Options& o, const std::optional<Joint>& j) {
  if (!o.dist.empty()) return parse_dist_text(o.dist);
  if (!o.dist_file.empty()) return read_dist_csv(o.dist_file);
  if (j) return j->prior();
  return std::nullopt;
}

SimplexOptConfig solver_config(const Options& o) {
  SimplexOptConfig c;
  c.restarts = o.restarts;
  c.max_iters = o.max_iters;
  c.tol = o.tol;
  c.floor = o.floor;
  c.step_size = o.step;
  c.seed = o.seed;
  validate(c);
  return c;
}

AcSolverConfig ac_config(const Options& o) {
  AcSolverConfig c;
  if (o.method == "eg" || o.method == "exp-gradient") {
    c.method = AcMethod::exp_gradient;
  } else if (o.method == "fixed-point") {
    c.method = AcMethod::fixed_point;
  } else {
    throw InputError("unknown solver method '" + o.method + "'");
  }
  c.restarts = o.restarts;
  c.max_iters = o.max_iters;
  c.tol = o.tol;
  c.floor = o.floor;
  c.step_size = o.step;
  c.seed = o.seed;
  validate(c);
  return c;
}

VulnSpec vuln_spec(const Options& o) {
  VulnSpec s;
  s.phi = MonotoneFn::parse(o.phi);
  s.psi = MonotoneFn::parse(o.psi);
  s.gain = GainFn::parse(o.gain);
  s.solver = solver_config(o);
  return s;
}

double need_alpha(const std::optional<double>& a, const std::string& measure) {
  if (!a) throw InputError("measure '" + measure + "' needs --alpha");
  return *a;
}

double need_beta(const std::optional<double>& b, const std::string& measure) {
  if (!b) throw InputError("measure '" + measure + "' needs --beta");
  return *b;
}

// ---- compute --------------------------------------------------------------

struct Computed {
  double value = 0.0;
  json solver = {{"iterations", 0}, {"converged", true}, {"restarts", 0}};
  json extra = json::object();
};

json meta_json(const VulnMeta& m) {
  return {{"iterations", m.iterations}, {"converged", m.converged}, {"restarts", m.restarts},
          {"floor", m.floor},           {"heuristic", m.heuristic}};
}

json dist_json(const Dist& d) { return std::vector<double>(d.begin(), d.end()); }

const Dist& need(const std::optional<Dist>& d, const std::string& m) {
  if (!d) throw InputError("measure '" + m + "' needs --dist, --dist-file or --joint");
  return *d;
}

const Joint& need(const std::optional<Joint>& j, const std::string& m) {
  if (!j) throw InputError("measure '" + m + "' needs --joint (or --channel with --prior)");
  return *j;
}

Computed compute_measure(const std::string& m, const Options& o, std::optional<double> alpha,
                         const std::optional<Dist>& dist, const std::optional<Joint>& joint) {
  Computed c;
  if (m == "shannon") {
    c.value = shannon(need(dist, m));
  } else if (m == "renyi") {
    c.value = renyi(need(dist, m), need_alpha(alpha, m));
  } else if (m == "hct" || m == "tsallis") {
    c.value = hct(need(dist, m), need_alpha(alpha, m));
  } else if (m == "sharma-mittal") {
    c.value = sharma_mittal(need(dist, m), need_alpha(alpha, m), need_beta(o.beta, m));
  } else if (m == "shannon-cond") {
    c.value = shannon_conditional(need(joint, m));
  } else if (m == "arimoto") {
    c.value = arimoto(need(joint, m), need_alpha(alpha, m));
  } else if (m == "hayashi") {
    c.value = hayashi(need(joint, m), need_alpha(alpha, m));
  } else if (m == "manije" || m == "hct-cond") {
    c.value = manije_hct(need(joint, m), need_alpha(alpha, m));
  } else if (m == "akm" || m == "sharma-mittal-cond") {
    c.value = akm_sharma_mittal(need(joint, m), need_alpha(alpha, m), need_beta(o.beta, m));
  } else if (m == "ac") {
    const AcSolution s = augustin_csiszar(need(joint, m), need_alpha(alpha, m), ac_config(o));
    c.value = s.value;
    c.solver = {{"iterations", s.iterations}, {"converged", s.converged}, {"restarts", s.restarts},
                {"best_restart", s.best_restart}, {"floor", o.floor}};
    json argmin = json::array();
    for (const auto& d : s.argmin) argmin.push_back(dist_json(d));
    c.extra["argmin"] = argmin;
  } else if (m == "g-entropy" || m == "vuln-prior") {
    const VulnValue v = prior_vulnerability(need(dist, m), vuln_spec(o));
    c.value = m == "g-entropy" ? -v.value : v.value;
    c.solver = meta_json(v.meta);
  } else if (m == "g-posterior" || m == "vuln-posterior") {
    const VulnValue v = posterior_vulnerability(need(joint, m), vuln_spec(o));
    c.value = m == "g-posterior" ? -v.value : v.value;
    c.solver = meta_json(v.meta);
  } else if (m == "g-bayes" || m == "vuln-bayes") {
    const BayesResult r = bayes_vulnerability(need(joint, m), vuln_spec(o));
    c.value = m == "g-bayes" ? -r.value : r.value;
    c.solver = meta_json(r.meta);
    json rule = json::array();
    if (const auto* idx = std::get_if<std::vector<std::size_t>>(&r.rule.actions)) {
      for (std::size_t k = 0; k < idx->size(); ++k) rule.push_back({{"y", r.rule.outputs[k]}, {"action", (*idx)[k]}});
    } else {
      const auto& acts = std::get<std::vector<Dist>>(r.rule.actions);
      for (std::size_t k = 0; k < acts.size(); ++k) {
        rule.push_back({{"y", r.rule.outputs[k]}, {"action", dist_json(acts[k])}});
      }
    }
    c.extra["rule"] = rule;
  } else if (m == "framework" || m == "framework-cond") {
    if (o.framework.empty()) throw InputError("measure '" + m + "' needs --framework");
    const EntropyFramework fw = EntropyFramework::parse(o.framework);
    c.value = m == "framework" ? framework_entropy(fw, need(dist, m)) : framework_cond_entropy(fw, need(joint, m));
  } else {
    throw InputError("unknown measure '" + m + "'");
  }
  return c;
}

json params_json(const std::string& m, const Options& o, std::optional<double> alpha) {
  json p = json::object();
  if (alpha) p["alpha"] = *alpha;
  if (o.beta) p["beta"] = *o.beta;
  if (m.rfind("g-", 0) == 0 || m.rfind("vuln-", 0) == 0) {
    p["phi"] = o.phi;
    p["psi"] = o.psi;
    p["gain"] = o.gain;
  }
  if (m.rfind("framework", 0) == 0) p["framework"] = o.framework;
  return p;
}

int cmd_compute(const Options& o, std::ostream& out) {
  if (o.measures.size() != 1) throw InputError("compute takes exactly one --measure");
  const std::string& m = o.measures.front();
  const auto joint = load_joint(o);
  const auto dist = load_dist(o, joint);
  const Computed c = compute_measure(m, o, o.alpha, dist, joint);
  switch (output_format(o, Format::table)) {
    case Format::json: {
      json rec = {{"command", "compute"}, {"measure", m},         {"params", params_json(m, o, o.alpha)},
                  {"value", c.value},     {"solver", c.solver}};
      for (auto& [k, v] : c.extra.items()) rec[k] = v;
      out << rec.dump(2) << "\n";
      break;
    }
    case Format::csv:
      out << "measure,alpha,beta,value,iterations,converged,restarts\n"
          << m << "," << (o.alpha ? syntax::format_number(*o.alpha) : "") << ","
          << (o.beta ? syntax::format_number(*o.beta) : "") << "," << syntax::format_number(c.value) << ","
          << c.solver["iterations"].get<std::size_t>() << "," << (c.solver["converged"].get<bool>() ? "true" : "false")
          << "," << c.solver["restarts"].get<std::size_t>() << "\n";
      break;
    case Format::table:
      out << "measure     " << m << "\n";
      if (o.alpha) out << "alpha       " << fmt6(*o.alpha) << "\n";
      if (o.beta) out << "beta        " << fmt6(*o.beta) << "\n";
      out << "value       " << fmt6(c.value) << "\n"
          << "iterations  " << c.solver["iterations"].get<std::size_t>() << "\n"
          << "converged   " << (c.solver["converged"].get<bool>() ? "true" : "false") << "\n"
          << "restarts    " << c.solver["restarts"].get<std::size_t>() << "\n";
      break;
  }
  return 0;
}

// ---- sweep ----------------------------------------------------------------

std::vector<double> sweep_alphas(const Options& o) {
  std::vector<double> as = o.alphas;
  if (!o.alpha_range.empty()) {
    std::vector<double> parts = parse_number_list(o.alpha_range, ':');
    if (parts.size() != 3 || !(parts[2] >= 1.0) || parts[2] != std::floor(parts[2])) {
      throw InputError("--alpha-range is lo:hi:count with count >= 1");
    }
    const auto n = static_cast<std::size_t>(parts[2]);
    for (std::size_t i = 0; i < n; ++i) {
      as.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  if (as.empty() && o.alpha) as.push_back(*o.alpha);
  if (as.empty()) throw InputError("sweep needs --alphas, --alpha-range or --alpha");
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  return as;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.measures.empty()) throw InputError("sweep needs at least one --measure");
  const auto joint = load_joint(o);
  const auto dist = load_dist(o, joint);
  const std::vector<double> as = sweep_alphas(o);
  std::vector<std::vector<double>> values(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (const auto& m : o.measures) values[i].push_back(compute_measure(m, o, as[i], dist, joint).value);
  }
  const Format f = output_format(o, Format::csv);
  if (f == Format::json) {
    json rows = json::array();
    for (std::size_t i = 0; i < as.size(); ++i) {
      for (std::size_t k = 0; k < o.measures.size(); ++k) {
        rows.push_back({{"alpha", as[i]}, {"measure", o.measures[k]}, {"value", values[i][k]}});
      }
    }
    out << json{{"command", "sweep"}, {"rows", rows}}.dump(2) << "\n";
    return 0;
  }
  auto num = [f](double v) { return f == Format::table ? fmt6(v) : syntax::format_number(v); };
  const char* sep = f == Format::table ? "\t" : ",";
  if (o.wide) {
    out << "alpha";
    for (const auto& m : o.measures) out << sep << m;
    out << "\n";
    for (std::size_t i = 0; i < as.size(); ++i) {
      out << num(as[i]);
      for (double v : values[i]) out << sep << num(v);
      out << "\n";
    }
  } else {
    out << "alpha" << sep << "measure" << sep << "value\n";
    for (std::size_t i = 0; i < as.size(); ++i) {
      for (std::size_t k = 0; k < o.measures.size(); ++k) {
        out << num(as[i]) << sep << o.measures[k] << sep << num(values[i][k]) << "\n";
      }
    }
  }
  return 0;
}

// ---- verify ---------------------------------------------------------------

Measure property_measure(const std::string& m, const Options& o) {
  if (m == "shannon" || m == "shannon-cond") return shannon_measure();
  if (m == "arimoto") return arimoto_measure(need_alpha(o.alpha, m));
  if (m == "hayashi") return hayashi_measure(need_alpha(o.alpha, m));
  if (m == "manije" || m == "hct" || m == "hct-cond") return hct_measure(need_alpha(o.alpha, m));
  if (m == "akm" || m == "sharma-mittal" || m == "sharma-mittal-cond") {
    return sharma_mittal_measure(need_alpha(o.alpha, m), need_beta(o.beta, m));
  }
  if (m == "ac") return ac_measure(need_alpha(o.alpha, m), ac_config(o));
  if (m == "g-posterior" || m == "vuln-posterior") return g_posterior_measure(vuln_spec(o));
  if (m == "g-bayes" || m == "vuln-bayes") return g_bayes_measure(vuln_spec(o));
  if (m == "framework" || m == "framework-cond") {
    if (o.framework.empty()) throw InputError("measure '" + m + "' needs --framework");
    return framework_measure(EntropyFramework::parse(o.framework));
  }
  throw InputError("unknown measure '" + m + "' for verify");
}

CoreFn ccv_core(const Options& o) {
  if (!o.framework.empty()) return EntropyFramework::parse(o.framework).core();
  if (o.core.empty()) throw InputError("ccv needs --core or --framework");
  if (o.core.find('(') != std::string::npos) return CoreFn::parse(o.core);
  if (o.core == "shannon") return CoreFn::shannon();
  const double a = need_alpha(o.alpha, o.core);
  if (o.core == "pnorm-power") return CoreFn::pnorm_power(a);
  if (o.core == "norm") return CoreFn::norm(a);
  if (o.core == "hct") return CoreFn::hct(a);
  throw InputError("unknown core '" + o.core + "'");
}

json ccv_json(const CoreFn& core, const CcvReport& r, std::uint64_t seed) {
  json o = {{"property", "ccv"},       {"core", core.to_string()}, {"trials", r.trials},
            {"seed", seed},            {"threshold", r.tol},       {"verdict", r.pass ? "pass" : "fail"},
            {"worst_violation", r.worst_violation}};
  if (r.p) o["witness"] = {{"p", dist_json(*r.p)}, {"q", dist_json(*r.q)}, {"lambda", r.lambda}};
  return o;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Format f = output_format(o, Format::json);
  if (f == Format::csv) throw InputError("verify supports json and table output");
  if (o.property == "ccv") {
    const CoreFn core = ccv_core(o);
    CcvOptions c;
    c.trials = o.trials ? o.trials : 10000;
    c.seed = o.seed;
    c.tol = o.check_tol;
    const CcvReport r = check_ccv(core, c);
    if (f == Format::json) {
      out << ccv_json(core, r, o.seed).dump(2) << "\n";
    } else {
      out << "property   ccv\ncore       " << core.to_string() << "\ntrials     " << r.trials << " (seed " << o.seed
          << ")\nthreshold  " << fmt6(r.tol) << "\nworst      " << fmt6(r.worst_violation) << "\nverdict    "
          << (r.pass ? "pass" : "fail") << "\n";
      if (r.p) {
        out << "witness    p=" << dist_json(*r.p).dump() << " q=" << dist_json(*r.q).dump()
            << " lambda=" << fmt6(r.lambda) << "\n";
      }
    }
    return r.pass ? 0 : kExitProperty;
  }

  PropertyOptions p;
  p.seed = o.seed;
  p.optimizer_slack = o.slack;
  if (o.check_tol) p.tol = *o.check_tol;
  PropertyReport rep;
  if (o.property == "cre" || o.property == "dpi") {
    if (o.measures.size() != 1) throw InputError("verify takes exactly one --measure");
    const Measure m = property_measure(o.measures.front(), o);
    if (o.property == "cre") {
      p.trials = o.trials ? o.trials : 1000;
      rep = check_cre(m, p);
    } else {
      p.trials = o.trials ? o.trials : 500;
      rep = check_dpi(m, p);
    }
  } else if (o.property == "identity") {
    p.trials = o.trials ? o.trials : 100;
    rep = check_posterior_identity(vuln_spec(o), p, o.check_tol.value_or(1e-6));
  } else {
    throw InputError("unknown property '" + o.property + "' (cre, dpi, ccv, identity)");
  }
  out << (f == Format::json ? to_json(rep) + "\n" : to_table(rep));
  return rep.pass() ? 0 : kExitProperty;
}

// ---- counterexample -------------------------------------------------------

int cmd_counterexample(const Options& o, std::ostream& out) {
  const double alpha = o.alpha.value_or(2.0);
  const CounterexampleReport r = run_counterexample(alpha, parse_dist_text(o.p0), ac_config(o));
  if (output_format(o, Format::table) == Format::json) {
    out << to_json(r) << "\n";
  } else {
    out << "alpha       " << fmt6(r.alpha) << "\n"
        << "a  H(p0)    " << fmt6(r.a) << "\n"
        << "b  rule     " << fmt6(r.b) << "\n"
        << "c  solver   " << fmt6(r.c) << "\n"
        << "gap a-c     " << fmt6(r.gap) << "\n"
        << "holds       " << (r.holds ? "yes" : "no") << "  (c <= b + 1e-6 < a)\n"
        << "converged   " << (r.solution.converged ? "true" : "false") << "\n";
  }
  return r.holds ? 0 : kExitProperty;
}

// ---- wiring ---------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format: table, json or csv");
  cmd->add_flag("--json", o.json_out, "Shorthand for --format json");
  cmd->add_option("--seed", o.seed, "Seed for restarts and random trials");
  cmd->add_option("--restarts", o.restarts, "Optimizer restarts");
  cmd->add_option("--max-iters", o.max_iters, "Optimizer iterations per restart");
  cmd->add_option("--tol", o.tol, "Optimizer tolerance");
  cmd->add_option("--floor", o.floor, "Simplex floor for soft actions");
  cmd->add_option("--step", o.step, "Initial mirror step");
  cmd->add_option("--method", o.method, "Augustin-Csiszar solver: eg or fixed-point");
}

void add_measure_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--measure", o.measures, "Measure name")->delimiter(',');
  cmd->add_option("--beta", o.beta, "Order beta");
  cmd->add_option("--phi", o.phi, "Inner KN generator");
  cmd->add_option("--psi", o.psi, "Outer KN generator");
  cmd->add_option("--gain", o.gain, "Gain: soft01, transform(f,g), table(..), csv(path)");
  cmd->add_option("--framework", o.framework, "framework(eta=..., core=..., agg=...)");
}

void add_inputs(CLI::App* cmd, Options& o) {
  cmd->add_option("--dist", o.dist, "Distribution, e.g. 0.9,0.1");
  cmd->add_option("--dist-file", o.dist_file, "Distribution CSV (one row)");
  cmd->add_option("--joint", o.joint, "Channel CSV with a 'prior' header column");
  cmd->add_option("--channel", o.channel, "Channel CSV (rows p(y|x))");
  cmd->add_option("--prior", o.prior, "Prior for --channel, e.g. 0.5,0.5");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Kolmogorov-Nagumo conditional entropies and generalized g-vulnerabilities", "kncond"};
  app.require_subcommand(1);
  app.add_option("--config", "key=value file; its entries override flags");

  auto* compute = app.add_subcommand("compute", "Evaluate one measure");
  add_common(compute, o);
  add_inputs(compute, o);
  add_measure_options(compute, o);
  compute->add_option("--alpha", o.alpha, "Order alpha");

  auto* sweep = app.add_subcommand("sweep", "Evaluate measures over a grid of alpha");
  add_common(sweep, o);
  add_inputs(sweep, o);
  add_measure_options(sweep, o);
  sweep->add_option("--alpha", o.alpha, "Single alpha");
  sweep->add_option("--alphas", o.alphas, "Alpha values")->delimiter(',');
  sweep->add_option("--alpha-range", o.alpha_range, "lo:hi:count, evenly spaced");
  sweep->add_flag("--wide", o.wide, "One column per measure");

  auto* verify = app.add_subcommand("verify", "Run a property check");
  add_common(verify, o);
  add_measure_options(verify, o);
  verify->add_option("--alpha", o.alpha, "Order alpha");
  verify->add_option("--property", o.property, "cre, dpi, ccv or identity")->required();
  verify->add_option("--core", o.core, "Core for ccv: shannon, pnorm-power, norm, hct or core text");
  verify->add_option("--trials", o.trials, "Number of trials");
  verify->add_option("--check-tol", o.check_tol, "Violation tolerance");
  verify->add_option("--slack", o.slack, "Extra tolerance for optimizer-valued measures");

  auto* counter = app.add_subcommand("counterexample", "Two-component mixture counterexample");
  add_common(counter, o);
  counter->add_option("--alpha", o.alpha, "Order alpha (default 2)");
  counter->add_option("--p0", o.p0, "First component (default 0.9,0.1)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(std::move(args));
    // CLI11 consumes the vector from the back.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (compute->parsed()) return cmd_compute(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    return cmd_counterexample(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace kncond
