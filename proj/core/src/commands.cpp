#include "kanopt/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "kanopt/generate.hpp"
#include "kanopt/report.hpp"
#include "kanopt/util.hpp"
#include "kanopt/workspace.hpp"

namespace kanopt {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += " ";
    out += p;
  }
  return out;
}

std::string status_for(int code) {
  switch (code) {
    case exit_ok: return "ok";
    case exit_validation: return "validation-failed";
    case exit_parse: return "parse-failed";
    case exit_absent: return "absent";
    case exit_budget: return "budget-exceeded";
    default: return "unknown";
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

CommandOutcome finish(const CliOptions& opts, Report& report, int code,
                      const Timer& timer) {
  if (!opts.no_timing) report.set_timing(timer.ms());
  return {code, opts.machine ? report.machine_text() : report.human_text()};
}

CommandOutcome emit_parse_failure(const CliOptions& opts, const Timer& timer,
                                  const std::vector<std::string>& diagnostics) {
  Report report(join(opts.echo), "-", status_for(exit_parse));
  report.set_diagnostics(diagnostics);
  return finish(opts, report, exit_parse, timer);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return bool(out);
}

CommandOutcome run_generate(const CliOptions& opts, const Timer& timer) {
  InstanceKind kind;
  if (opts.file == "set") kind = InstanceKind::set;
  else if (opts.file == "cat") kind = InstanceKind::cat;
  else if (opts.file == "loss") kind = InstanceKind::loss;
  else {
    return emit_parse_failure(
        opts, timer,
        {"generate expects an instance kind (set|cat|loss), got '" +
         opts.file + "'"});
  }
  GenBounds bounds;
  Workspace ws;
  try {
    ws = generate_instance(kind, bounds, opts.seed);
  } catch (const BoundsTooLarge& e) {
    Report report(join(opts.echo), "-", status_for(exit_validation));
    ValidationReport vr;
    vr.add("bounds too large", e.what());
    report.set_findings(vr);
    return finish(opts, report, exit_validation, timer);
  }
  const auto text = serialise(ws);
  const auto digest = workspace_digest(ws);
  if (!opts.emit.empty() && !write_file(opts.emit, text)) {
    return emit_parse_failure(opts, timer,
                              {"cannot write file " + opts.emit});
  }
  if (!opts.machine && opts.emit.empty()) {
    return {exit_ok, text};  // raw instance text, pipeable
  }
  Report report(join(opts.echo), digest, status_for(exit_ok));
  report.set_scalar("kind", opts.file);
  report.set_scalar("seed", std::to_string(opts.seed));
  if (!opts.emit.empty()) {
    report.set_scalar("emitted", opts.emit);
  } else {
    report.set_scalar("text", text);
  }
  return finish(opts, report, exit_ok, timer);
}

// Builds the emission workspace for `represent --emit`: the constructed
// hom categories plus the 2-category and its extension problem.
Workspace representation_workspace(const RepresentationBundle& bundle) {
  Workspace out;
  const auto& T = *bundle.T;
  const auto models = T.hom_ptr(bundle.problem.mu, bundle.problem.tau);
  const auto data = T.hom_ptr(bundle.problem.delta, bundle.problem.tau);
  const auto one = T.hom_ptr(bundle.problem.mu, bundle.problem.mu);
  const auto iota = T.hom_ptr(bundle.problem.delta, bundle.problem.mu);
  out.categories[models->name] = models;
  out.categories[data->name] = data;
  out.categories[one->name] = one;
  out.categories[iota->name] = iota;
  out.two_categories[T.name] = bundle.T;
  out.extensions[bundle.problem.name] = bundle.problem;
  out.block_order = {{"category", models->name}, {"category", data->name},
                     {"category", one->name},    {"category", iota->name},
                     {"twocat", T.name},         {"extension", bundle.problem.name}};
  return out;
}

CommandOutcome dispatch(const CliOptions& opts, const Workspace& ws,
                        const Timer& timer) {
  const auto digest = workspace_digest(ws);
  Report report(join(opts.echo), digest, status_for(exit_ok));
  const Budget budget{opts.budget};

  const auto workspace_findings = validate_workspace(ws);

  if (opts.command == "validate") {
    ValidationReport findings;
    std::vector<std::string> decls;
    for (const auto& [kind, name] : ws.block_order) {
      if (!opts.name.empty() && name != opts.name) continue;
      decls.push_back(kind + " " + name);
    }
    if (opts.name.empty()) {
      findings = workspace_findings;
    } else {
      if (decls.empty()) findings.add("unknown declaration", opts.name);
      for (const auto& v : workspace_findings.violations) {
        for (const auto& d : decls) {
          if (v.rule.rfind(d + ": ", 0) == 0) {
            findings.violations.push_back(v);
            break;
          }
        }
      }
    }
    const int code = findings.ok() ? exit_ok : exit_validation;
    Report out(join(opts.echo), digest, status_for(code));
    out.set_list("declarations", decls);
    out.set_findings(findings);
    return finish(opts, out, code, timer);
  }

  if (opts.name.empty()) {
    return emit_parse_failure(opts, timer,
                              {opts.command + " requires --name"});
  }

  // Every declaration must pass its validator before use.
  if (!workspace_findings.ok()) {
    Report failed(join(opts.echo), digest, status_for(exit_validation));
    failed.set_findings(workspace_findings);
    return finish(opts, failed, exit_validation, timer);
  }

  auto unknown = [&](const char* kind) {
    Report failed(join(opts.echo), digest, status_for(exit_validation));
    ValidationReport vr;
    vr.add(std::string("unknown ") + kind, opts.name);
    failed.set_findings(vr);
    return finish(opts, failed, exit_validation, timer);
  };

  try {
    if (opts.command == "minimise") {
      auto it = ws.set_problems.find(opts.name);
      if (it == ws.set_problems.end()) return unknown("setproblem");
      const auto result = brute_force_minimisers_set(it->second);
      std::vector<std::string> names;
      for (const auto m : result.minimisers) {
        names.push_back(it->second.models[m]);
      }
      report.set_list("minimisers", names);
      report.set_scalar("error", result.error ? result.error->str() : "-");
      if (result.empty_model_space) {
        report.set_scalar("warning", "empty model space");
      }
      return finish(opts, report, exit_ok, timer);
    }

    if (opts.command == "adjoint") {
      auto it = ws.functors.find(opts.name);
      if (it == ws.functors.end()) return unknown("functor");
      std::string obstruction;
      const auto adj = left_adjoint_via_comma(it->second, budget, &obstruction);
      if (!adj) {
        Report absent(join(opts.echo), digest, status_for(exit_absent));
        absent.set_scalar("reason", obstruction);
        return finish(opts, absent, exit_absent, timer);
      }
      const auto& D = *it->second.target;
      const auto& M = *it->second.source;
      std::vector<std::pair<std::string, std::string>> left_obj, left_mor,
          unit, counit;
      for (std::uint32_t d = 0; d < D.object_count(); ++d) {
        left_obj.push_back(
            {D.objects[d], M.objects[adj->left.obj_map[d].value]});
        unit.push_back({D.objects[d], D.mor(adj->unit.components[d]).name});
      }
      for (std::uint32_t g = 0; g < D.morphism_count(); ++g) {
        left_mor.push_back(
            {D.mor(MorId{g}).name, M.mor(adj->left.mor_map[g]).name});
      }
      for (std::uint32_t m = 0; m < M.object_count(); ++m) {
        counit.push_back({M.objects[m], M.mor(adj->counit.components[m]).name});
      }
      report.set_map("left_on_objects", left_obj);
      report.set_map("left_on_morphisms", left_mor);
      report.set_map("unit", unit);
      report.set_map("counit", counit);
      report.set_scalar("verified", "true");
      return finish(opts, report, exit_ok, timer);
    }

    if (opts.command == "kan") {
      auto it = ws.extensions.find(opts.name);
      if (it == ws.extensions.end()) return unknown("extension");
      const auto mode =
          opts.mode == "weak" ? KanMode::weak : KanMode::strict;
      const auto pairs = left_kan_extension(it->second, mode, budget);
      const auto& models =
          it->second.T->hom_at(it->second.mu, it->second.tau);
      const auto& data =
          it->second.T->hom_at(it->second.delta, it->second.tau);
      std::vector<std::string> kan_objects, etas;
      for (const auto& p : pairs) {
        kan_objects.push_back(models.objects[p.lan.value]);
        etas.push_back(data.mor(p.eta).name);
      }
      const int code = pairs.empty() ? exit_absent : exit_ok;
      Report out(join(opts.echo), digest, status_for(code));
      out.set_scalar("mode", opts.mode == "weak" ? "weak" : "strict");
      out.set_list("kan_objects", kan_objects);
      out.set_list("units", etas);
      if (pairs.empty()) out.set_scalar("reason", "no Kan extension exists");
      return finish(opts, out, code, timer);
    }

    if (opts.command == "represent") {
      auto it = ws.set_problems.find(opts.name);
      if (it == ws.set_problems.end()) return unknown("setproblem");
      const auto bundle = build_representation(it->second);
      const auto check = check_representation(it->second, budget);
      std::vector<std::pair<std::string, std::string>> alg;
      for (std::uint32_t d = 0; d < bundle.alg.size(); ++d) {
        alg.push_back({bundle.data_labels[d],
                       bundle.alg[d] == RepresentationBundle::npos
                           ? "-"
                           : bundle.model_labels[bundle.alg[d]]});
      }
      report.set_map("alg", alg);
      report.set_list("kan_objects", check.kan_objects);
      report.set_list("minimisers", check.minimisers);
      report.set_scalar("subset_ok", check.subset_ok ? "true" : "false");
      report.set_scalar("iff_ok", check.iff_ok
                                      ? (*check.iff_ok ? "true" : "false")
                                      : "not-applicable");
      if (!opts.emit.empty()) {
        const auto emitted = representation_workspace(bundle);
        const auto text = serialise(emitted);
        if (!write_file(opts.emit, text)) {
          return emit_parse_failure(opts, timer,
                                    {"cannot write file " + opts.emit});
        }
        report.set_scalar("emitted", opts.emit);
        report.set_scalar("emit_digest", to_hex(fnv1a64(text)));
      }
      return finish(opts, report, exit_ok, timer);
    }

    if (opts.command == "lift") {
      auto it = ws.loss_problems.find(opts.name);
      if (it == ws.loss_problems.end()) return unknown("lossproblem");
      const auto lift = left_kan_lift(it->second, budget);
      if (!lift) {
        Report absent(join(opts.echo), digest, status_for(exit_absent));
        absent.set_scalar("reason", "no Kan lift exists");
        return finish(opts, absent, exit_absent, timer);
      }
      report.set_scalar("lift_object",
                        it->second.domain->objects[lift->lift_object.value]);
      report.set_scalar("eta", it->second.phi->mor(lift->eta).name);
      return finish(opts, report, exit_ok, timer);
    }
  } catch (const BudgetExceeded& e) {
    Report out(join(opts.echo), digest, status_for(exit_budget));
    out.set_scalar("estimate", std::to_string(e.estimate));
    return finish(opts, out, exit_budget, timer);
  } catch (const Error& e) {
    Report out(join(opts.echo), digest, status_for(exit_validation));
    ValidationReport vr;
    vr.add("command failed", e.what());
    out.set_findings(vr);
    return finish(opts, out, exit_validation, timer);
  }

  return emit_parse_failure(opts, timer,
                            {"unknown command '" + opts.command + "'"});
}

}  // namespace

CommandOutcome run_command(const CliOptions& opts) {
  Timer timer;
  if (opts.command == "generate") return run_generate(opts, timer);

  const auto text = read_file(opts.file);
  if (!text) {
    return emit_parse_failure(opts, timer, {"cannot open file " + opts.file});
  }
  auto parsed = parse_workspace(*text);
  if (!parsed.ok()) {
    std::vector<std::string> lines;
    for (const auto& d : parsed.diagnostics) {
      lines.push_back(std::to_string(d.line) + ":" + std::to_string(d.col) +
                      ": " + d.message);
    }
    return emit_parse_failure(opts, timer, lines);
  }
  return dispatch(opts, parsed.workspace, timer);
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"workbench for finite categorical error minimisation"};
  CliOptions opts;
  app.add_option("command", opts.command,
                 "validate|minimise|adjoint|kan|represent|lift|generate")
      ->required();
  app.add_option("file", opts.file,
                 "instance file (or instance kind for generate)")
      ->required();
  app.add_option("--name", opts.name, "declaration to operate on");
  app.add_option("--mode", opts.mode, "kan mode: strict|weak")
      ->check(CLI::IsMember({"strict", "weak"}));
  app.add_option("--budget", opts.budget, "candidate budget for searches");
  app.add_option("--emit", opts.emit, "write generated/emitted text here");
  app.add_option("--seed", opts.seed, "generator seed");
  app.add_flag("--machine", opts.machine, "structured report output");
  app.add_flag("--no-timing", opts.no_timing, "suppress timing in reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return exit_ok;
    }
    err << e.what() << "\n";
    return exit_parse;
  }

  static const std::set<std::string> commands = {
      "validate", "minimise", "adjoint", "kan", "represent", "lift",
      "generate"};
  if (commands.count(opts.command) == 0) {
    err << "unknown command '" << opts.command << "'\n";
    return exit_parse;
  }

  for (int i = 1; i < argc; ++i) opts.echo.push_back(argv[i]);
  const auto outcome = run_command(opts);
  out << outcome.output;
  return outcome.exit_code;
}

}  // namespace kanopt
