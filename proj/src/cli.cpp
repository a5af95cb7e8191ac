#include "mtdd/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtdd/automata.hpp"
#include "mtdd/dense_oracle.hpp"
#include "mtdd/equality.hpp"
#include "mtdd/errors.hpp"
#include "mtdd/generators.hpp"
#include "mtdd/grammar.hpp"
#include "mtdd/matrix_ops.hpp"

namespace mtdd {
namespace {

struct Loaded {
  Grammar g;
  Var a;
};

// "path" or "path:Var"; a bare path selects the start variable. A file whose
// literal name contains ':' wins over the split interpretation.
Loaded loadValue(const std::string& spec) {
  if (!std::filesystem::exists(spec)) {
    const auto pos = spec.rfind(':');
    if (pos != std::string::npos && pos > 0) {
      const std::string path = spec.substr(0, pos);
      const std::string var = spec.substr(pos + 1);
      if (std::filesystem::exists(path)) {
        Grammar g = parseGrammarFile(path);
        if (!g.hasVar(var))
          throw ValidateError("no variable '" + var + "' in '" + path + "'");
        const Var a = g.var(var);
        return {std::move(g), a};
      }
    }
  }
  Grammar g = parseGrammarFile(spec);
  const Var a = g.start();
  return {std::move(g), a};
}

std::string ringToken(const Semiring& ring) {
  return ring.isModular() ? "Zmod" + ring.modulus().get_str() : "Z";
}

Semiring parseRing(const std::string& s) {
  if (s == "Z") return Semiring::integers();
  if (s.rfind("Zmod", 0) == 0 && s.size() > 4 &&
      std::all_of(s.begin() + 4, s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    Int k(s.substr(4));
    if (k >= 2) return Semiring::modular(k);
    throw ValidateError("modulus must be at least 2");
  }
  throw ValidateError("unrecognized ring '" + s + "', expected Z or Zmod<k>");
}

unsigned long parseCount(const std::string& s, const std::string& what) {
  if (s.empty() ||
      !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ValidateError("expected a nonnegative integer for " + what + ", got '" + s + "'");
  try {
    return std::stoul(s);
  } catch (const std::exception&) {
    throw ValidateError(what + " '" + s + "' is out of range");
  }
}

Int parseScalar(const std::string& s, const std::string& what) {
  const std::size_t digits = s.rfind('-', 0) == 0 ? 1 : 0;
  if (s.size() == digits ||
      !std::all_of(s.begin() + digits, s.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    throw ValidateError("expected an integer for " + what + ", got '" + s + "'");
  return Int(s);
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("cannot write '" + path + "'");
}

Grammar makeGenerator(const std::string& kind, const std::vector<std::string>& params,
                      const Semiring& ring) {
  auto wantParams = [&](std::size_t n) {
    if (params.size() != n)
      throw ValidateError("generator '" + kind + "' takes " + std::to_string(n) +
                          (n == 1 ? " parameter" : " parameters"));
  };
  auto intParam = [&](std::size_t i) {
    const unsigned long v = parseCount(params[i], "a generator parameter");
    if (v > 1'000'000) throw ValidateError("generator parameter '" + params[i] + "' too large");
    return static_cast<int>(v);
  };
  auto zOnly = [&] {
    if (ring.isModular())
      throw ValidateError("generator '" + kind + "' is defined over Z only");
  };
  if (kind == "identity") { wantParams(1); return identityMatrix(intParam(0), ring); }
  if (kind == "zero") { wantParams(1); return zeroMatrix(intParam(0), ring); }
  if (kind == "lower-triangular") { wantParams(1); return lowerTriangular(intParam(0), ring); }
  if (kind == "row-index") { wantParams(1); zOnly(); return rowIndex(intParam(0)); }
  if (kind == "all-equal") { wantParams(1); zOnly(); return allEqual(intParam(0)); }
  if (kind == "walsh") { wantParams(1); return walsh(intParam(0), ring); }
  if (kind == "scaled-identity") {
    wantParams(2);
    return scaledIdentity(intParam(0), parseScalar(params[1], "the scale"), ring);
  }
  if (kind == "binary-enum") { wantParams(1); zOnly(); return binaryEnumVector(intParam(0)); }
  if (kind == "product-witness") { wantParams(1); zOnly(); return productWitness(intParam(0)); }
  throw ValidateError("unknown generator '" + kind + "'");
}

std::vector<std::string> splitSymbols(const std::string& s) {
  if (s == "-") return {};
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t comma = s.find(',', from);
    const std::string piece = s.substr(from, comma - from);
    if (piece.empty()) throw ValidateError("empty symbol in input '" + s + "'");
    parts.push_back(piece);
    if (comma == std::string::npos) return parts;
    from = comma + 1;
  }
}

std::string oneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"decision-diagram grammars for huge matrices: generate, operate, query,"
               " decide, convert"};
  app.name("mtdd");
  app.require_subcommand(1);
  int code = 0;

  std::string checkSpec;
  auto* check = app.add_subcommand("check", "parse and validate a grammar file");
  check->add_option("value", checkSpec, "grammar file, optionally file:Var")->required();
  check->callback([&] {
    const Loaded v = loadValue(checkSpec);
    for (const auto& w : v.g.warnings()) err << "warning: " << w << "\n";
    out << "ok ring=" << ringToken(v.g.ring())
        << " dim=" << (v.g.dim() == Dim::Vector ? 1 : 2) << " height=" << v.g.height(v.a)
        << " vars=" << v.g.varCount() << " size=" << grammarSize(v.g) << "\n";
  });

  std::string sizeSpec;
  auto* size = app.add_subcommand("size", "print the grammar size");
  size->add_option("value", sizeSpec)->required();
  size->callback([&] { out << grammarSize(loadValue(sizeSpec).g) << "\n"; });

  std::string entrySpec;
  std::vector<std::string> entryIdx;
  auto* entry = app.add_subcommand("entry", "print one entry of the represented value");
  entry->add_option("value", entrySpec)->required();
  entry->add_option("index", entryIdx, "1-based indices: one for vectors, two for matrices")
      ->expected(1, 2);
  entry->callback([&] {
    const Loaded v = loadValue(entrySpec);
    if (entryIdx.empty()) throw ValidateError("entry needs at least one index");
    const Int i = parseScalar(entryIdx[0], "an index");
    if (v.g.dim() == Dim::Matrix) {
      if (entryIdx.size() != 2) throw ValidateError("matrix entry needs two indices");
      out << entryOf(v.g, v.a, i, parseScalar(entryIdx[1], "an index")).value.get_str() << "\n";
    } else {
      if (entryIdx.size() != 1) throw ValidateError("vector entry takes one index");
      out << entryOf(v.g, v.a, i).value.get_str() << "\n";
    }
  });

  std::string traceSpec;
  auto* trace = app.add_subcommand("trace", "print the trace of a matrix");
  trace->add_option("value", traceSpec)->required();
  trace->callback([&] {
    const Loaded v = loadValue(traceSpec);
    out << aggregate(v.g, v.a, Aggregate::Trace).value.get_str() << "\n";
  });

  std::string sumSpec;
  auto* sum = app.add_subcommand("sum", "print the sum of all entries");
  sum->add_option("value", sumSpec)->required();
  sum->callback([&] {
    const Loaded v = loadValue(sumSpec);
    out << aggregate(v.g, v.a, Aggregate::Sum).value.get_str() << "\n";
  });

  struct BinState {
    std::string lhs, rhs, outPath;
    std::size_t ruleLimit = kDefaultRuleLimit;
  };
  auto addBinary = [&app](const std::string& name, const std::string& desc, bool hasLimit,
                          auto fn) {
    auto st = std::make_shared<BinState>();
    auto* c = app.add_subcommand(name, desc);
    c->add_option("lhs", st->lhs)->required();
    c->add_option("rhs", st->rhs)->required();
    c->add_option("-o,--out", st->outPath, "output grammar file")->required();
    if (hasLimit) c->add_option("--rule-limit", st->ruleLimit, "abort past this many rules");
    c->callback([st, fn] {
      const Loaded l = loadValue(st->lhs);
      const Loaded r = loadValue(st->rhs);
      writeGrammarFile(fn(l, r, st->ruleLimit), st->outPath);
    });
  };
  addBinary("mul", "matrix product", true, [](const Loaded& l, const Loaded& r, std::size_t lim) {
    return multiply(l.g, l.a, r.g, r.a, lim);
  });
  addBinary("add", "pointwise sum", false, [](const Loaded& l, const Loaded& r, std::size_t) {
    return addTop(l.g, l.a, r.g, r.a);
  });
  addBinary("tensor", "Kronecker product", true,
            [](const Loaded& l, const Loaded& r, std::size_t lim) {
              return tensorG(l.g, l.a, r.g, r.a, lim);
            });
  addBinary("hadamard", "entrywise product", true,
            [](const Loaded& l, const Loaded& r, std::size_t lim) {
              return hadamardG(l.g, l.a, r.g, r.a, lim);
            });

  std::string trSpec, trOut;
  auto* transpose = app.add_subcommand("transpose", "transpose a matrix");
  transpose->add_option("value", trSpec)->required();
  transpose->add_option("-o,--out", trOut, "output grammar file")->required();
  transpose->callback([&] {
    const Loaded v = loadValue(trSpec);
    writeGrammarFile(transposeG(v.g, v.a), trOut);
  });

  std::string powSpec, powExp, powOut;
  std::size_t powLimit = kDefaultRuleLimit;
  auto* power = app.add_subcommand("power", "iterated matrix product");
  power->add_option("value", powSpec)->required();
  power->add_option("exponent", powExp)->required();
  power->add_option("-o,--out", powOut, "output grammar file")->required();
  power->add_option("--rule-limit", powLimit, "abort past this many rules");
  power->callback([&] {
    const Loaded v = loadValue(powSpec);
    const unsigned long n = parseCount(powExp, "the exponent");
    if (n > std::numeric_limits<unsigned>::max())
      throw ValidateError("exponent '" + powExp + "' is out of range");
    writeGrammarFile(powerG(v.g, v.a, static_cast<unsigned>(n), powLimit), powOut);
  });

  std::string eqL, eqR;
  auto* equal = app.add_subcommand("equal", "decide equality of two values");
  equal->add_option("lhs", eqL)->required();
  equal->add_option("rhs", eqR)->required();
  equal->callback([&] {
    const Loaded l = loadValue(eqL);
    const Loaded r = loadValue(eqR);
    const bool same = equalAcross(l.g, l.a, r.g, r.a);
    out << (same ? "equal" : "unequal") << "\n";
    code = same ? 0 : 1;
  });

  std::string zeroSpec;
  auto* iszero = app.add_subcommand("iszero", "decide whether a value is all zeros");
  iszero->add_option("value", zeroSpec)->required();
  iszero->callback([&] {
    const Loaded v = loadValue(zeroSpec);
    const bool zero = isZero(v.g, v.a);
    out << (zero ? "zero" : "nonzero") << "\n";
    code = zero ? 0 : 1;
  });

  std::string genKind, genOut, genRing = "Z";
  std::vector<std::string> genParams;
  auto* gen = app.add_subcommand("gen", "emit a built-in grammar family member");
  gen->add_option("kind", genKind,
                  "identity | zero | lower-triangular | row-index | all-equal | walsh |"
                  " scaled-identity | binary-enum | product-witness")
      ->required();
  gen->add_option("params", genParams, "kind-specific integers")->expected(0, 2);
  gen->add_option("-o,--out", genOut, "output grammar file")->required();
  gen->add_option("--ring", genRing, "Z or Zmod<k>");
  gen->callback(
      [&] { writeGrammarFile(makeGenerator(genKind, genParams, parseRing(genRing)), genOut); });

  std::string satKind, satCnf, satOut;
  auto* sat = app.add_subcommand("sat", "build a satisfiability reduction from DIMACS");
  sat->add_option("kind", satKind, "diag | clause-vectors | nilpotent")->required();
  sat->add_option("cnf", satCnf, "DIMACS file")->required();
  sat->add_option("-o,--out", satOut, "output grammar file")->required();
  sat->callback([&] {
    const Cnf c = parseDimacsFile(satCnf);
    if (satKind == "diag") {
      writeGrammarFile(satDiag(c).combined, satOut);
    } else if (satKind == "nilpotent") {
      const SatNilpotent n = satNilpotent(c);
      writeGrammarFile(n.g, satOut);
      out << n.exponent << "\n";
    } else if (satKind == "clause-vectors") {
      const std::vector<Grammar> vs = satClauseVectors(c);
      for (std::size_t i = 0; i < vs.size(); ++i)
        writeGrammarFile(vs[i], satOut + "." + std::to_string(i + 1));
      out << vs.size() << "\n";
    } else {
      throw ValidateError("unknown sat construction '" + satKind + "'");
    }
  });

  std::string d2mIn, d2mOut;
  auto* d2m = app.add_subcommand("dfa2mtdd", "convert a layered DFA file to a 0/1 grammar");
  d2m->add_option("dfa", d2mIn)->required();
  d2m->add_option("-o,--out", d2mOut, "output grammar file")->required();
  d2m->callback([&] { writeGrammarFile(dfaToMtdd(parseDfaFile(d2mIn)), d2mOut); });

  std::string m2dIn, m2dOut;
  auto* m2d = app.add_subcommand("mtdd2dfa", "convert a 0/1 grammar to a layered DFA file");
  m2d->add_option("value", m2dIn)->required();
  m2d->add_option("-o,--out", m2dOut, "output DFA file")->required();
  m2d->callback([&] {
    const Loaded v = loadValue(m2dIn);
    writeTextFile(m2dOut, serializeDfa(mtddToDfa(v.g, v.a)));
  });

  std::string stepTm, stepLen, stepOut;
  auto* step = app.add_subcommand("tm-step", "one-step relation of a Turing machine");
  step->add_option("machine", stepTm)->required();
  step->add_option("tapeLen", stepLen)->required();
  step->add_option("-o,--out", stepOut, "output grammar file")->required();
  step->callback([&] {
    const TuringMachine m = parseTmFile(stepTm);
    const unsigned long len = parseCount(stepLen, "the tape length");
    if (len < 1 || len > 1000) throw ValidateError("tape length must be between 1 and 1000");
    writeGrammarFile(dfaToMtdd(tmStepDfa(m, static_cast<int>(len))), stepOut);
  });

  std::string rdKind, rdTm, rdInput, rdLen, rdOut;
  auto* reduce = app.add_subcommand("tm-reduce", "acceptance reduction graph of a machine");
  reduce->add_option("kind", rdKind, "det | count")->required();
  reduce->add_option("machine", rdTm)->required();
  reduce->add_option("input", rdInput, "comma-separated tape symbols, - for empty")->required();
  reduce->add_option("tapeLen", rdLen)->required();
  reduce->add_option("-o,--out", rdOut, "output grammar file")->required();
  reduce->callback([&] {
    ReductionKind kind;
    if (rdKind == "det") kind = ReductionKind::Det;
    else if (rdKind == "count") kind = ReductionKind::Count;
    else throw ValidateError("unknown reduction '" + rdKind + "', expected det or count");
    const TuringMachine m = parseTmFile(rdTm);
    const unsigned long len = parseCount(rdLen, "the tape length");
    if (len < 1 || len > 1000) throw ValidateError("tape length must be between 1 and 1000");
    writeGrammarFile(reductionGraph(m, kind, splitSymbols(rdInput), static_cast<int>(len)),
                     rdOut);
  });

  std::string orKind, orSpec;
  int orCap = kDefaultDenseCap;
  auto* oracle = app.add_subcommand("oracle", "dense reference computations, cap-guarded");
  oracle->add_option("kind", orKind, "densify | det")->required();
  oracle->add_option("value", orSpec)->required();
  oracle->add_option("--dense-cap", orCap, "largest height to densify");
  oracle->callback([&] {
    const Loaded v = loadValue(orSpec);
    DenseMatrix m = densify(v.g, v.a, orCap);
    if (orKind == "densify") {
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
          if (j) out << ' ';
          out << m.at(i, j).get_str();
        }
        out << "\n";
      }
    } else if (orKind == "det") {
      out << denseDet(std::move(m), v.g.ring()).get_str() << "\n";
    } else {
      throw ValidateError("unknown oracle '" + orKind + "', expected densify or det");
    }
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << oneLine(e.what()) << "\n";
    return 3;
  } catch (const CapError& e) {
    err << "error: " << oneLine(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << oneLine(e.what()) << "\n";
    return 3;
  }
  return code;
}

}  // namespace mtdd
