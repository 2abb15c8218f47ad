#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coexist/regimes.hpp"
#include "coexist/scenario.hpp"
#include "coexist/sweep.hpp"

namespace coexist {

inline constexpr const char* kSweepCsvHeader =
    "eps,winner_regime,p_opt,q_opt,leader_value,follower_value,oracle_agrees";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool verbose) {
  out << kSweepCsvHeader << (verbose ? ",reason" : "") << '\n';
  for (const auto& r : rows) {
    out << format_double(r.eps) << ',';
    if (r.winner) {
      out << regime_code(*r.winner) << ',' << format_double(r.p_opt) << ','
          << format_double(r.q_opt) << ',' << format_double(r.leader_value) << ','
          << format_double(r.follower_value) << ',';
    } else {
      out << "0,,,,,";
    }
    if (r.oracle_agrees) out << (*r.oracle_agrees ? "true" : "false");
    if (verbose) out << ',' << r.skip_reason;
    out << '\n';
  }
}

inline nlohmann::ordered_json solution_to_json(const RegimeSolution& s) {
  nlohmann::ordered_json j;
  j["regime"] = std::string(to_string(s.regime));
  j["p_opt"] = s.p_opt;
  j["q_opt"] = s.q_opt;
  j["leader_value"] = s.leader_value;
  j["follower_value"] = s.follower_value;
  if (s.follower.action.operates()) {
    j["follower_price"] = s.follower.action.price();
  } else {
    j["follower_price"] = nullptr;
  }
  j["theta_at_p"] = s.follower.theta_at_p;
  if (s.active_boundary) j["active_boundary"] = std::string(to_string(*s.active_boundary));
  return j;
}

inline nlohmann::ordered_json report_to_json(const EquilibriumReport& rep) {
  nlohmann::ordered_json j;
  j["params"] = params_to_json(rep.params);
  j["derived"] = {{"p_mx", rep.derived.p_mx},     {"p_tilde_mx", rep.derived.p_tilde_mx},
                  {"p_sw", rep.derived.p_sw},     {"p_bar", rep.derived.p_bar},
                  {"l_mx", rep.derived.l_mx},     {"r_mx", rep.derived.r_mx},
                  {"scale", rep.derived.scale}};
  auto& regs = j["regimes"] = nlohmann::ordered_json::array();
  for (const auto& o : rep.outcomes) {
    nlohmann::ordered_json r;
    r["regime"] = std::string(to_string(o.regime));
    r["gate_open"] = o.gate_open;
    r["reason"] = o.reason;
    r["solution"] = o.solution ? solution_to_json(*o.solution) : nlohmann::ordered_json(nullptr);
    regs.push_back(r);
  }
  j["winner"] = solution_to_json(rep.winner);
  j["lemma_flags"] = {{"lemma1_holds", rep.lemma_flags.lemma1_holds},
                      {"loss_regime_empty", rep.lemma_flags.loss_regime_empty},
                      {"lemma2_condition_holds", rep.lemma_flags.lemma2_condition_holds}};
  if (rep.oracle_check) {
    const auto& o = *rep.oracle_check;
    j["oracle"] = {{"best_p", o.best_p},
                   {"best_q", o.best_q},
                   {"best_value", o.best_value},
                   {"region_at_best", std::string(to_string(o.regime_at_best))},
                   {"gap_vs_candidate", o.gap_vs_candidate},
                   {"agrees", o.agrees}};
  }
  return j;
}

inline std::string fixed(double v, int digits = 6) {
  if (v == kInf) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline void write_report(std::ostream& out, const EquilibriumReport& rep) {
  const auto& d = rep.derived;
  out << "p_mx " << fixed(d.p_mx) << "  p_tilde_mx " << fixed(d.p_tilde_mx) << "  p_sw "
      << fixed(d.p_sw) << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-15s %-5s %16s %16s %18s  %s\n", "regime", "gate", "p", "q",
                "leader_value", "note");
  out << line;
  for (const auto& o : rep.outcomes) {
    if (o.solution) {
      std::snprintf(line, sizeof line, "%-15s %-5s %16.6f %16.6f %18.6f  %s\n",
                    std::string(to_string(o.regime)).c_str(), o.gate_open ? "open" : "shut",
                    o.solution->p_opt, o.solution->q_opt, o.solution->leader_value,
                    o.reason.c_str());
    } else {
      std::snprintf(line, sizeof line, "%-15s %-5s %16s %16s %18s  %s\n",
                    std::string(to_string(o.regime)).c_str(), "shut", "-", "-", "-",
                    o.reason.c_str());
    }
    out << line;
  }
  const auto& w = rep.winner;
  out << "\nwinner " << to_string(w.regime) << " at p = " << fixed(w.p_opt)
      << ", q = " << fixed(w.q_opt) << ": leader " << fixed(w.leader_value) << ", follower "
      << fixed(w.follower_value) << '\n';
  out << "lemma 1 condition " << (rep.lemma_flags.lemma1_holds ? "holds" : "fails")
      << "; loss regime " << (rep.lemma_flags.loss_regime_empty ? "empty" : "non-empty")
      << "; lemma 2 condition " << (rep.lemma_flags.lemma2_condition_holds ? "holds" : "fails")
      << '\n';
}

inline void write_oracle_summary(std::ostream& out, const OracleResult& o, double cand_p,
                                 double cand_q) {
  out << "candidate (" << fixed(cand_p) << ", " << fixed(cand_q) << ") value "
      << (o.candidate_value ? fixed(*o.candidate_value) : std::string("-")) << '\n'
      << "oracle    (" << fixed(o.best_p) << ", " << fixed(o.best_q) << ") value "
      << fixed(o.best_value) << " in " << to_string(o.regime_at_best) << '\n'
      << "gap " << fixed(o.gap_vs_candidate, 9) << "  value " << (o.value_agrees ? "ok" : "MISMATCH")
      << "  region " << (o.region_agrees ? "ok" : "MISMATCH") << '\n'
      << (o.agrees ? "agree" : "DISAGREE") << '\n';
}

}  // namespace coexist
