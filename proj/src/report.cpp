#include "twistrank/report.hpp"

#include <sstream>

namespace twistrank::report {

namespace {

json curve_json(long long a, long long b, long long c) {
  return json{{"a", a}, {"b", b}, {"c", c}};
}

json curve_json(const Curve& cv) { return curve_json(cv.a(), cv.b(), cv.c()); }

std::string q_str(const mpq_class& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

json opt_str(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

std::optional<std::string> opt_str_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

json to_json(const SumReport& rep) {
  json j;
  j["type"] = "sum";
  j["series"] = rep.series;
  j["curve"] = curve_json(rep.curve_a, rep.curve_b, rep.curve_c);
  j["params"] = {{"j", rep.j},
                 {"k", rep.k},
                 {"N", rep.N},
                 {"B", rep.B},
                 {"window", opt_str(rep.window_str)},
                 {"membership", opt_str(rep.membership)}};
  j["value"] = rep.value;
  j["term_count"] = rep.term_count;
  j["abs_sum"] = rep.abs_sum;
  j["kahan_error_bound"] = rep.kahan_error_bound;
  j["excluded_count"] = rep.excluded_count;
  j["tie_ambiguous_count"] = rep.tie_ambiguous_count;
  j["threads"] = rep.threads;
  if (rep.breakdown) {
    json b = json::object();
    for (const auto& [key, val] : *rep.breakdown) b[key] = val;
    j["breakdown"] = b;
  } else {
    j["breakdown"] = nullptr;
  }
  return j;
}

SumReport sum_report_from_json(const json& j) {
  SumReport rep;
  rep.series = j.at("series").get<std::string>();
  rep.curve_a = j.at("curve").at("a").get<long long>();
  rep.curve_b = j.at("curve").at("b").get<long long>();
  rep.curve_c = j.at("curve").at("c").get<long long>();
  const auto& p = j.at("params");
  rep.j = p.at("j").get<double>();
  rep.k = p.at("k").get<double>();
  rep.N = p.at("N").get<long long>();
  rep.B = p.at("B").get<long long>();
  rep.window_str = opt_str_from(p.at("window"));
  rep.membership = opt_str_from(p.at("membership"));
  rep.value = j.at("value").get<double>();
  rep.term_count = j.at("term_count").get<std::uint64_t>();
  rep.abs_sum = j.at("abs_sum").get<double>();
  rep.kahan_error_bound = j.at("kahan_error_bound").get<double>();
  rep.excluded_count = j.at("excluded_count").get<std::uint64_t>();
  rep.tie_ambiguous_count = j.at("tie_ambiguous_count").get<std::uint64_t>();
  rep.threads = j.at("threads").get<unsigned>();
  if (!j.at("breakdown").is_null()) {
    std::map<std::string, double> b;
    for (const auto& [key, val] : j.at("breakdown").items()) b[key] = val.get<double>();
    rep.breakdown = std::move(b);
  }
  return rep;
}

std::string sum_report_csv(const SumReport& rep) {
  std::ostringstream os;
  os << "series,a,b,c,j,k,N,B,window,membership,value,term_count,abs_sum,"
        "kahan_error_bound,excluded_count,tie_ambiguous_count,threads\n";
  os.precision(17);
  os << rep.series << ',' << rep.curve_a << ',' << rep.curve_b << ',' << rep.curve_c << ','
     << rep.j << ',' << rep.k << ',' << rep.N << ',' << rep.B << ','
     << csv_escape(rep.window_str.value_or("")) << ',' << rep.membership.value_or("") << ','
     << rep.value << ',' << rep.term_count << ',' << rep.abs_sum << ','
     << rep.kahan_error_bound << ',' << rep.excluded_count << ',' << rep.tie_ambiguous_count
     << ',' << rep.threads << '\n';
  return os.str();
}

json to_json(const Curve& curve, const DHistogram& hist) {
  json entries = json::array();
  for (const auto& e : hist.entries) {
    json witnesses = json::array();
    json points = json::array();
    for (const auto& w : e.witnesses) {
      witnesses.push_back(json::array({w.u, w.v}));
      TwistPoint pt = lift_point(curve, w.u, w.v);
      points.push_back(json{{"x", q_str(pt.x)}, {"y", q_str(pt.y)}});
    }
    entries.push_back(json{{"D", e.D.get_str()},
                           {"count", e.count},
                           {"sample_witnesses", witnesses},
                           {"sample_points", points}});
  }
  json j;
  j["type"] = "rank";
  j["curve"] = curve_json(curve);
  j["box"] = hist.box;
  j["window"] = opt_str(hist.window_str);
  j["total_pairs"] = hist.total_pairs;
  j["entries"] = entries;
  return j;
}

DHistogram histogram_from_json(const json& j) {
  DHistogram hist;
  hist.box = j.at("box").get<long long>();
  hist.window_str = opt_str_from(j.at("window"));
  hist.total_pairs = j.at("total_pairs").get<std::uint64_t>();
  Curve curve(j.at("curve").at("a").get<long long>(), j.at("curve").at("b").get<long long>(),
              j.at("curve").at("c").get<long long>());
  for (const auto& e : j.at("entries")) {
    DEntry entry;
    entry.D = mpz_class(e.at("D").get<std::string>());
    entry.count = e.at("count").get<std::uint64_t>();
    for (const auto& w : e.at("sample_witnesses")) {
      long long u = w.at(0).get<long long>();
      long long v = w.at(1).get<long long>();
      entry.witnesses.push_back({u, v, curve.F(u, v)});
    }
    hist.entries.push_back(std::move(entry));
  }
  return hist;
}

json to_json(const Curve& curve, const RootSet& roots) {
  json j;
  j["type"] = "omega";
  j["curve"] = curve_json(curve);
  j["d"] = roots.d;
  j["residues"] = roots.residues;
  return j;
}

RootSet root_set_from_json(const json& j) {
  RootSet out;
  out.d = j.at("d").get<long long>();
  out.residues = j.at("residues").get<std::vector<long long>>();
  return out;
}

json to_json(const Curve& curve, const ReducedLattice& rl, double j_exp, double k_exp) {
  json j;
  j["type"] = "reduce";
  j["curve"] = curve_json(curve);
  j["alpha"] = rl.triple.alpha;
  j["d"] = rl.triple.d;
  j["d_prime"] = rl.triple.d_prime;
  j["basis"] = json::array({json::array({rl.basis0.u, rl.basis0.v}),
                            json::array({rl.basis1.u, rl.basis1.v})});
  j["omega"] = json::array({rl.omega.u, rl.omega.v});
  j["omega_prime"] = json::array({rl.omega_prime.u, rl.omega_prime.v});
  j["norm_sq"] = rl.norm_sq;
  j["norm_sq_prime"] = rl.norm_sq_prime;
  j["in_psi"] = rl.in_psi;
  j["F_nonzero"] = rl.F_nonzero;
  j["min_vector_count"] = rl.min_vector_count;
  j["psi_tie_ambiguous"] = rl.psi_tie_ambiguous;
  j["f_tie_ambiguous"] = rl.f_tie_ambiguous;
  j["params"] = {{"j", j_exp}, {"k", k_exp}};
  j["term_value"] = q_term(curve, rl.triple, j_exp, k_exp);
  return j;
}

json to_json(const Curve& curve, const TwistTriple& triple, long long u, long long v,
             long long t) {
  json j;
  j["type"] = "decompose";
  j["curve"] = curve_json(curve);
  j["u"] = u;
  j["v"] = v;
  j["t"] = t;
  j["alpha"] = triple.alpha;
  j["d"] = triple.d;
  j["d_prime"] = triple.d_prime;
  return j;
}

json to_json(const ExperimentReport& rep) {
  json j;
  j["type"] = "experiment";
  j["curve"] = curve_json(rep.curve_a, rep.curve_b, rep.curve_c);
  j["B"] = rep.B;
  j["C"] = rep.C;
  j["count"] = rep.count;
  j["triples"] = rep.triples;
  j["is_model"] = rep.is_model;
  j["log4_reference"] = rep.log4_reference;
  j["logr_reference"] = rep.logr_reference ? json(*rep.logr_reference) : json(nullptr);
  j["seed"] = rep.seed;
  j["C1"] = rep.C1;
  j["C2"] = rep.C2;
  j["membership"] = opt_str(rep.membership);
  return j;
}

ExperimentReport experiment_from_json(const json& j) {
  ExperimentReport rep;
  rep.curve_a = j.at("curve").at("a").get<long long>();
  rep.curve_b = j.at("curve").at("b").get<long long>();
  rep.curve_c = j.at("curve").at("c").get<long long>();
  rep.B = j.at("B").get<long long>();
  rep.C = j.at("C").get<double>();
  rep.count = j.at("count").get<std::uint64_t>();
  rep.triples = j.at("triples").get<std::uint64_t>();
  rep.is_model = j.at("is_model").get<bool>();
  rep.log4_reference = j.at("log4_reference").get<double>();
  if (!j.at("logr_reference").is_null()) rep.logr_reference = j.at("logr_reference").get<double>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.C1 = j.at("C1").get<double>();
  rep.C2 = j.at("C2").get<double>();
  rep.membership = opt_str_from(j.at("membership"));
  return rep;
}

json to_json(const HeuristicBoundReport& rep) {
  json cps = json::array();
  for (const auto& cp : rep.checkpoints)
    cps.push_back(json{{"x", cp.x}, {"sum_4nu", cp.sum_4nu}, {"ratio", cp.ratio_to_x_log3}});
  json j;
  j["type"] = "heuristic_bound";
  j["params"] = {{"j", rep.j}, {"k", rep.k}, {"C1", rep.C1}, {"T", rep.T}};
  j["prefactor"] = rep.prefactor;
  j["series_partial"] = rep.series_partial;
  j["bound"] = rep.bound;
  j["checkpoints"] = cps;
  return j;
}

HeuristicBoundReport heuristic_report_from_json(const json& j) {
  HeuristicBoundReport rep;
  const auto& p = j.at("params");
  rep.j = p.at("j").get<double>();
  rep.k = p.at("k").get<double>();
  rep.C1 = p.at("C1").get<double>();
  rep.T = p.at("T").get<long long>();
  rep.prefactor = j.at("prefactor").get<double>();
  rep.series_partial = j.at("series_partial").get<double>();
  rep.bound = j.at("bound").get<double>();
  for (const auto& cp : j.at("checkpoints"))
    rep.checkpoints.push_back({cp.at("x").get<long long>(), cp.at("sum_4nu").get<std::uint64_t>(),
                               cp.at("ratio").get<double>()});
  return rep;
}

json to_json(const RatioHistogram& hist) {
  json j;
  j["type"] = "omega_ratio_histogram";
  j["lo"] = hist.lo;
  j["hi"] = hist.hi;
  j["bins"] = hist.bins;
  j["total"] = hist.total;
  return j;
}

json stats_to_json(const Curve& curve, const std::vector<StatsRow>& rows, std::uint64_t seed,
                   unsigned replicates, const AnnulusModel& model) {
  json rws = json::array();
  for (const auto& r : rows)
    rws.push_back(json{{"B", r.B},
                       {"C", r.C},
                       {"observed", r.observed},
                       {"model_mean", r.model_mean},
                       {"model_std", r.model_std},
                       {"log4_reference", r.log4_reference}});
  json j;
  j["type"] = "stats";
  j["curve"] = curve_json(curve);
  j["seed"] = seed;
  j["replicates"] = replicates;
  j["C1"] = model.C1;
  j["C2"] = model.C2;
  j["rows"] = rws;
  return j;
}

std::string stats_csv(const std::vector<StatsRow>& rows) {
  std::ostringstream os;
  os << "B,C,observed,model_mean,model_std,log4_reference\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.B << ',' << r.C << ',' << r.observed << ',' << r.model_mean << ',' << r.model_std
       << ',' << r.log4_reference << '\n';
  return os.str();
}

}  // namespace twistrank::report
