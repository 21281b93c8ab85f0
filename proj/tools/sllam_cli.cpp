#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sllam/coh.hpp"
#include "sllam/ext.hpp"
#include "sllam/parser.hpp"
#include "sllam/reduce.hpp"
#include "sllam/strict.hpp"
#include "sllam/typecheck.hpp"
#include "sllam/verify.hpp"

using namespace sllam;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string backend = "strict";
  std::size_t fuel = 1000;
  std::uint64_t s = 8;
  std::uint64_t budget = 3;
  std::uint64_t k = 16;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string output = "text";
  bool ext = false;
  std::size_t count = 100;
  std::size_t size = 25;
};

class Out {
 public:
  explicit Out(bool structured) : structured_(structured) {}
  bool structured() const { return structured_; }

  void text(const std::string& line) {
    if (!structured_) std::cout << line << "\n";
  }
  void record(const json& j) {
    if (structured_) std::cout << j.dump() << "\n";
  }

 private:
  bool structured_;
};

/// Inline term, or the contents of a file when the argument names one.
std::string read_input(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

const char* parse_code(ParseError::Code c) {
  switch (c) {
    case ParseError::Code::Syntax: return "Syntax";
    case ParseError::Code::DuplicateBasisName: return "DuplicateBasisName";
    case ParseError::Code::ExtensionDisabled: return "ExtensionDisabled";
  }
  return "Syntax";
}

ObsSpec obs_of(const RunConfig& c) {
  ObsSpec o;
  o.s = c.s;
  o.budget = c.budget;
  o.k = c.k;
  o.samples = c.samples;
  o.seed = c.seed;
  o.ext = c.ext;
  return o;
}

TypingOptions typing_of(const RunConfig& c) {
  TypingOptions t;
  if (c.ext) t.mode = TypingMode::Extended;
  return t;
}

Judgment judgment_of(const RunConfig& c) {
  std::string text = read_input(c.input);
  if (text.find("|-") != std::string::npos) return parse_judgment(text, c.ext);
  ParseOptions po;
  po.extensions = c.ext;
  Term t = parse_term(text, po);
  return {Basis{}, t, infer({}, t, typing_of(c)).type};
}

Term closed_term(const RunConfig& c) {
  ParseOptions po;
  po.extensions = c.ext;
  return parse_term(read_input(c.input), po);
}

int exit_for(const std::vector<LawReport>& rs) {
  bool fail = false, inconclusive = false;
  for (const auto& r : rs) {
    if (r.informational) continue;
    fail |= r.verdict == LawVerdict::Fail;
    inconclusive |= r.verdict == LawVerdict::Inconclusive;
  }
  return fail ? kFail : inconclusive ? kInconclusive : kPass;
}

json law_json(const LawReport& r) {
  return {{"kind", "law"},           {"law", r.law},
          {"backend", r.backend},    {"tried", r.tried},
          {"verdict", to_string(r.verdict)}, {"counterexample", r.counterexample},
          {"note", r.note},          {"informational", r.informational}};
}

void print_laws(Out& out, const std::vector<LawReport>& rs, const RunConfig& c) {
  std::size_t pass = 0, fail = 0, inc = 0;
  for (const auto& r : rs) {
    out.record(law_json(r));
    std::string line = std::string(to_string(r.verdict)) + "  " + r.law + "  [" + r.backend + ", " +
                       std::to_string(r.tried) + " tried]";
    if (!r.counterexample.empty()) line += "  " + r.counterexample;
    if (!r.note.empty()) line += "  (" + r.note + ")";
    if (r.informational) line += "  informational";
    out.text(line);
    if (r.informational) continue;
    if (r.verdict == LawVerdict::Pass) ++pass;
    else if (r.verdict == LawVerdict::Fail) ++fail;
    else ++inc;
  }
  out.text(std::to_string(pass) + " pass, " + std::to_string(fail) + " fail, " + std::to_string(inc) +
           " inconclusive (backend " + c.backend + ", s=" + std::to_string(c.s) + ", budget=" +
           std::to_string(c.budget) + ", k=" + std::to_string(c.k) + ", seed=" + std::to_string(c.seed) +
           ")");
  out.record({{"kind", "summary"}, {"pass", pass}, {"fail", fail}, {"inconclusive", inc},
              {"backend", c.backend}, {"s", c.s}, {"budget", c.budget}, {"k", c.k}, {"seed", c.seed}});
}

int cmd_parse(const RunConfig& c, Out& out) {
  ParseOptions po;
  po.extensions = c.ext;
  Term t = parse_term(read_input(c.input), po);
  out.text(pretty(t));
  out.record({{"kind", "parse"}, {"term", pretty(t)}, {"size", t.size()}});
  return kPass;
}

int cmd_check(const RunConfig& c, Out& out) {
  Judgment j = judgment_of(c);
  auto d = check(j.basis, j.term, j.type, typing_of(c));
  out.text("ok: " + pretty(j.type));
  out.text(serialize(*d));
  out.record({{"kind", "check"}, {"verdict", "ok"}, {"type", pretty(j.type)}, {"derivation", serialize(*d)}});
  return kPass;
}

int cmd_reduce(const RunConfig& c, Out& out) {
  Term t = closed_term(c);
  auto r = normalize(t, Strategy::leftmost(), c.fuel, true);
  if (!out.structured()) std::cout << format_trace(r.trace);
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    out.record({{"kind", "step"},
                {"index", i},
                {"rule", to_string(r.trace[i].site.tag)},
                {"path", path_string(r.trace[i].site.path)},
                {"term", pretty(r.trace[i].result)}});
  out.text((r.exhausted ? "exhausted after " : "normal form after ") + std::to_string(r.steps) +
           " step(s): " + pretty(r.term));
  out.record({{"kind", "result"}, {"term", pretty(r.term)}, {"steps", r.steps}, {"exhausted", r.exhausted}});
  return r.exhausted ? kInconclusive : kPass;
}

template <class E>
int cmd_denote(const RunConfig& c, Out& out, Backend<E>& B) {
  Term t = closed_term(c);
  ObsSpec obs = obs_of(c);
  auto typing = infer({}, t, typing_of(c));
  if (typing.type.is_ground()) {
    auto g = denote_ground(t, B, obs);
    std::string shown = g.kind == GroundResult::Kind::Num ? std::to_string(g.value)
                        : g.kind == GroundResult::Kind::Bottom ? "bottom"
                                                               : "unstable";
    out.text(shown);
    out.record({{"kind", "denote"}, {"backend", B.name()}, {"value", shown}});
    return g.kind == GroundResult::Kind::Unstable ? kInconclusive : kPass;
  }
  auto ap = approximants(*typing.derivation, B, obs.k);
  Sampler<E> sampler(B, obs);
  std::string lo = B.observe(ap.at_k(B.unit_point()), ap.at_k.cod, obs, sampler);
  std::string hi = B.observe(ap.at_2k(B.unit_point()), ap.at_k.cod, obs, sampler);
  out.text(hi);
  out.record({{"kind", "denote"}, {"backend", B.name()}, {"value", hi}, {"stable", lo == hi}});
  return lo == hi ? kPass : kInconclusive;
}

std::vector<Term> corpus(const RunConfig& c) {
  std::vector<Term> out;
  GenOptions g;
  g.ext = c.ext;
  for (std::size_t i = 0; i < c.count; ++i) {
    Type ty = i % 4 == 3 ? nat_to_nat() : Type::ground();
    out.push_back(gen_term({}, ty, c.size, c.seed * 1000003 + i, g));
  }
  return out;
}

template <class E>
int cmd_soundness(const RunConfig& c, Out& out, Backend<E>& B) {
  std::vector<Term> terms = c.input.empty() ? corpus(c) : std::vector<Term>{closed_term(c)};
  ObsSpec obs = obs_of(c);
  std::vector<LawReport> all;
  std::size_t steps = 0, inconclusive = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto r = soundness_check(terms[i], c.fuel, B, obs, true);
    steps += r.steps;
    inconclusive += r.inconclusive;
    for (const auto& line : r.step_lines) out.text("  " + line);
    out.text(std::string(to_string(r.report.verdict)) + "  #" + std::to_string(i) + "  " + pretty(terms[i]) +
             "  [" + std::to_string(r.steps) + " step(s)]" +
             (r.report.counterexample.empty() ? "" : "  " + r.report.counterexample));
    out.record({{"kind", "soundness"},
                {"index", i},
                {"term", pretty(terms[i])},
                {"backend", B.name()},
                {"steps", r.steps},
                {"steps_detail", r.step_lines},
                {"inconclusive", r.inconclusive},
                {"verdict", to_string(r.report.verdict)},
                {"counterexample", r.report.counterexample}});
    all.push_back(r.report);
  }
  out.text(std::to_string(terms.size()) + " term(s), " + std::to_string(steps) + " step(s), " +
           std::to_string(inconclusive) + " inconclusive step(s)");
  out.record({{"kind", "summary"}, {"terms", terms.size()}, {"steps", steps}, {"inconclusive", inconclusive},
              {"backend", B.name()}, {"fuel", c.fuel}, {"seed", c.seed}});
  return exit_for(all);
}

template <class E>
int cmd_laws(const RunConfig& c, Out& out, Backend<E>& B) {
  auto rs = law_suite(B, obs_of(c));
  print_laws(out, rs, c);
  return exit_for(rs);
}

template <class E>
int cmd_subst(const RunConfig& c, Out& out, Backend<E>& B) {
  std::vector<LawReport> rs;
  for (auto sc : {SubstCase::Ground, SubstCase::Higher, SubstCase::Stable})
    rs.push_back(substitution_check(sc, c.count, B, obs_of(c)));
  print_laws(out, rs, c);
  return exit_for(rs);
}

template <class E>
int cmd_witness(const RunConfig& c, Out& out, Backend<E>& B) {
  auto rs = incompleteness_witness(B, obs_of(c), c.fuel);
  print_laws(out, rs, c);
  return exit_for(rs);
}

int cmd_gen(const RunConfig& c, Out& out) {
  auto terms = corpus(c);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out.text(pretty(terms[i]));
    out.record({{"kind", "term"}, {"index", i}, {"term", pretty(terms[i])}, {"size", terms[i].size()}});
  }
  return kPass;
}

template <class E>
int dispatch(const RunConfig& c, Out& out, Backend<E>& B) {
  B.set_fix_iterations(c.k);
  if (c.command == "denote") return cmd_denote(c, out, B);
  if (c.command == "soundness") return cmd_soundness(c, out, B);
  if (c.command == "laws") return cmd_laws(c, out, B);
  if (c.command == "subst") return cmd_subst(c, out, B);
  return cmd_witness(c, out, B);
}

int run(const RunConfig& c) {
  Out out(c.output == "structured");
  auto fail = [&](const std::string& reason, const std::string& message, int code) {
    out.text("error: " + reason + ": " + message);
    out.record({{"kind", "error"}, {"reason", reason}, {"message", message}});
    return code;
  };
  try {
    if (c.command == "parse") return cmd_parse(c, out);
    if (c.command == "check") return cmd_check(c, out);
    if (c.command == "reduce") return cmd_reduce(c, out);
    if (c.command == "gen") return cmd_gen(c, out);
    if (c.backend == "coh") {
      CohBackend b;
      return dispatch(c, out, b);
    }
    StrictBackend b;
    return dispatch(c, out, b);
  } catch (const ParseError& e) {
    return fail(parse_code(e.code()), e.render(), kFail);
  } catch (const TypeError& e) {
    return fail(to_string(e.code()), e.explanation(), kFail);
  } catch (const GenerationFailed& e) {
    return fail("GenerationFailed", e.what(), kFail);
  } catch (const BackendFailure& e) {
    return fail("BackendFailure", e.what(), kFail);
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Typed lambda calculus with linear and stable variables: checker, reducer and models"};
  app.require_subcommand(1, 1);

  auto common = [&cfg](CLI::App* sub, bool input, bool input_required) {
    if (input) {
      auto* opt = sub->add_option("input", cfg.input, "term text or a file containing it");
      if (input_required) opt->required();
    }
    sub->add_option("--backend", cfg.backend, "strict or coh")->check(CLI::IsMember({"strict", "coh"}));
    sub->add_option("--fuel", cfg.fuel, "reduction fuel");
    sub->add_option("--s", cfg.s, "numeral bound for samples");
    sub->add_option("--budget", cfg.budget, "trace probe budget");
    sub->add_option("--k", cfg.k, "fix iterations");
    sub->add_option("--samples", cfg.samples, "sampled arguments per object");
    sub->add_option("--seed", cfg.seed, "generator seed");
    sub->add_option("--output", cfg.output, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_flag("--ext", cfg.ext, "enable the exponential extension");
  };

  struct Sub {
    const char* name;
    const char* help;
    bool input, required, corpus;
  };
  const Sub subs[] = {
      {"parse", "echo the parsed term", true, true, false},
      {"check", "type a term or judgment and dump its derivation", true, true, false},
      {"reduce", "leftmost reduction trace", true, true, false},
      {"denote", "ground value or observed denotation", true, true, false},
      {"soundness", "per-step denotation checks (generated corpus without input)", true, false, true},
      {"laws", "categorical law suite", false, false, false},
      {"subst", "substitution suite", false, false, true},
      {"witness", "incompleteness witness", false, false, false},
      {"gen", "emit a generated corpus", false, false, true},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    common(sub, s.input, s.required);
    if (s.corpus) {
      sub->add_option("--count", cfg.count, "corpus size");
      sub->add_option("--size", cfg.size, "maximum term size");
    }
    sub->callback([&cfg, name = s.name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  return run(cfg);
}
