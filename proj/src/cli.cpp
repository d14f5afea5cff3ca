#include "spinel/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spinel/core.hpp"
#include "spinel/diagnostics.hpp"
#include "spinel/elaborate.hpp"
#include "spinel/reduce.hpp"
#include "spinel/surface.hpp"

namespace spinel {

namespace {

struct CliError {
  int exitCode;
};

void diagnostic(std::ostream& err, const SourceLoc& loc, const std::string& message) {
  err << loc.str() << ": error: " << message << "\n";
}

std::string readFileOrThrow(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path << ": error: cannot open file\n";
    throw CliError{1};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ElabResult loadProgram(const std::string& path, std::ostream& err) {
  std::string source = readFileOrThrow(path, err);
  std::vector<Declaration> decls = parseFile(source, path);
  ElabResult result = elaborateProgram(decls);
  if (!result.errors.empty()) {
    for (const DeclDiagnostic& d : result.errors) diagnostic(err, d.loc, d.message);
    throw CliError{1};
  }
  return result;
}

SurfacePtr loadExpr(const std::string& exprText, const SignatureTable& sigs, std::istream& in,
                    std::ostream& err, bool printResolved) {
  std::string text = exprText;
  if (text == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  SurfacePtr resolved = resolve(parseExpr(text, "<expr>"), sigs);
  if (printResolved) err << dumpResolved(resolved) << "\n";
  return resolved;
}

int runVerify(const ElabResult& program, std::ostream& out) {
  std::vector<std::string> report;
  auto describe = [](const std::string& decl, const ArityViolation& v, const char* what) {
    std::string line = "violation in '" + decl + "' (" + what + ") at " + v.path + ": ";
    if (v.kind == ArityViolation::Kind::UnknownFunction) {
      line += "unknown function '" + v.fn + "'";
    } else {
      line += "function '" + v.fn + "' expects " + std::to_string(v.expected) +
              " arguments, got " + std::to_string(v.actual);
    }
    return line;
  };

  for (const std::string& name : program.declared) {
    const Signature* sig = program.sigs.find(name);
    for (const ArityViolation& v : checkExactlyApplied(retTy(*sig), program.sigs))
      report.push_back(describe(name, v, "signature type"));
    if (const DefinedBody* def = sig->defined())
      for (const ArityViolation& v : checkExactlyApplied(def->body, program.sigs))
        report.push_back(describe(name, v, "body"));
  }

  if (!report.empty()) {
    for (const std::string& line : report) out << line << "\n";
    return 1;
  }
  out << "OK " << program.declared.size() << " declarations\n";
  return 0;
}

}  // namespace

int runCli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"spinel: a core language with exactly-applied function calls"};
  app.require_subcommand(1);

  bool printResolved = false;
  app.add_flag("--print-resolved", printResolved, "dump the resolved surface tree to stderr");

  std::string file;
  std::string exprText;
  std::string typeText;
  std::uint64_t maxSteps = 0;

  CLI::App* elabCmd = app.add_subcommand("elab", "elaborate an expression, print term and type");
  elabCmd->add_option("FILE", file, "declaration file")->required();
  elabCmd->add_option("--expr", exprText, "expression ('-' reads stdin)")->required();
  elabCmd->fallthrough();

  CLI::App* checkCmd = app.add_subcommand("check", "check an expression against a type");
  checkCmd->add_option("FILE", file, "declaration file")->required();
  checkCmd->add_option("--expr", exprText, "expression ('-' reads stdin)")->required();
  checkCmd->add_option("--type", typeText, "surface type to check against")->required();
  checkCmd->fallthrough();

  CLI::App* normCmd = app.add_subcommand("norm", "elaborate and fully normalize an expression");
  normCmd->add_option("FILE", file, "declaration file")->required();
  normCmd->add_option("--expr", exprText, "expression ('-' reads stdin)")->required();
  CLI::Option* maxStepsOpt = normCmd->add_option("--max-steps", maxSteps, "reduction step limit");
  normCmd->fallthrough();

  CLI::App* verifyCmd = app.add_subcommand("verify", "check that every declaration is exactly-applied");
  verifyCmd->add_option("FILE", file, "declaration file")->required();
  verifyCmd->fallthrough();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    ElabResult program = loadProgram(file, err);

    if (app.got_subcommand(elabCmd)) {
      SurfacePtr expr = loadExpr(exprText, program.sigs, in, err, printResolved);
      Context ctx(program.sigs);
      Inferred result = infer(ctx, expr);
      out << prettyPrint(result.term) << "\n";
      out << ": " << prettyPrint(result.type) << "\n";
      return 0;
    }

    if (app.got_subcommand(checkCmd)) {
      SurfacePtr expr = loadExpr(exprText, program.sigs, in, err, printResolved);
      Context ctx(program.sigs);
      TermPtr expected = elabType(ctx, parseType(typeText, "<type>"));
      out << prettyPrint(check(ctx, expr, expected)) << "\n";
      return 0;
    }

    if (app.got_subcommand(normCmd)) {
      SurfacePtr expr = loadExpr(exprText, program.sigs, in, err, printResolved);
      Context ctx(program.sigs);
      Inferred result = infer(ctx, expr);
      std::optional<StepBudget> budget;
      if (maxStepsOpt->count() > 0) budget.emplace(maxSteps);
      TermPtr normal =
          normalize(result.term, program.sigs, budget ? &*budget : nullptr);
      out << prettyPrint(normal) << "\n";
      return 0;
    }

    return runVerify(program, out);
  } catch (const CliError& e) {
    return e.exitCode;
  } catch (const ParseError& e) {
    diagnostic(err, e.loc, e.what());
    return 1;
  } catch (const ElabError& e) {
    diagnostic(err, e.loc, e.what());
    return 1;
  } catch (const StepLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace spinel
