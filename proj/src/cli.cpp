#include "haarint/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

#include <CLI11.hpp>

#include "haarint/asymptotics.hpp"
#include "haarint/dispatch.hpp"
#include "haarint/hciz.hpp"
#include "haarint/weingarten.hpp"

namespace haarint {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitParse = 2;
constexpr int kExitDispatch = 3;
constexpr int kExitEngine = 4;
constexpr int kExitInternal = 5;

json scalarToJson(const Scalar& s) {
  json j;
  j["re"] = ratStr(s.re);
  if (s.im != 0) j["im"] = ratStr(s.im);
  return j;
}

json polyToJson(const DimPoly& p) {
  json arr = json::array();
  for (int e = 0; e <= p.degree(); ++e) {
    Scalar c = p.coeff(e);
    if (c.isZero()) continue;
    json pair = json::array();
    pair.push_back(e);
    pair.push_back(ratStr(c.re));
    if (c.im != 0) pair.push_back(ratStr(c.im));
    arr.push_back(pair);
  }
  return arr;
}

DimPoly polyFromJson(const nlohmann::json& arr) {
  std::vector<Scalar> coeffs;
  for (const auto& pair : arr) {
    int e = pair.at(0).get<int>();
    Rat re(pair.at(1).get<std::string>());
    Rat im = pair.size() > 2 ? Rat(pair.at(2).get<std::string>()) : Rat(0);
    if (static_cast<std::size_t>(e) >= coeffs.size())
      coeffs.resize(static_cast<std::size_t>(e) + 1, Scalar(0));
    coeffs[static_cast<std::size_t>(e)] = Scalar(re, im);
  }
  return DimPoly(std::move(coeffs));
}

double elapsedMs(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

json resultToJson(const IntegrationResult& r) {
  json j;
  switch (r.kind) {
    case IntegrationResult::Kind::Rational:
      j["type"] = "rational";
      j["num"] = polyToJson(r.rat.num());
      j["den"] = polyToJson(r.rat.den());
      j["text"] = r.rat.str();
      break;
    case IntegrationResult::Kind::Scalar:
      j["type"] = "scalar";
      j["value"] = scalarToJson(r.scalar);
      j["text"] = r.scalar.str();
      break;
    case IntegrationResult::Kind::Trace:
      j["type"] = "trace";
      j["text"] = r.trace.str();
      break;
    case IntegrationResult::Kind::Matrix: {
      j["type"] = "matrix";
      json rows = json::array();
      for (long i = 0; i < r.matrix.rows(); ++i) {
        json row = json::array();
        for (long jj = 0; jj < r.matrix.cols(); ++jj)
          row.push_back(r.matrix(i, jj).str());
        rows.push_back(row);
      }
      j["entries"] = rows;
      break;
    }
  }
  return j;
}

int expressionDegree(const Expr& e) {
  Expr n = normalize(e);
  int best = 0;
  try {
    if (!n.containsKind(Expr::Kind::Tr) && !n.containsKind(Expr::Kind::Symbol)) {
      for (const auto& t : expand(n))
        best = std::max(best, static_cast<int>(t.factors.size()));
    }
  } catch (const Error&) {
    // degree metadata is best-effort
  }
  return best;
}

struct Ctx {
  std::string format = "text";
  std::ostringstream out;
  bool json() const { return format == "json"; }
};

void emitRecord(Ctx& ctx, json record, const std::string& textForm) {
  if (ctx.json()) {
    ctx.out << record.dump(2) << "\n";
  } else {
    ctx.out << textForm << "\n";
  }
}

// --- subcommand bodies ------------------------------------------------------

void cmdIntegrate(Ctx& ctx, const std::string& exprText, const std::string& measureText,
                  long asymOrder, bool haveAsym, long dimOverride, bool haveOverride,
                  bool cold, int maxDegree) {
  auto start = std::chrono::steady_clock::now();
  if (cold) cacheClear();
  WeingartenCache::instance().resetHits();
  MeasureSpec spec = parseMeasure(measureText);
  EngineOptions opts;
  opts.maxDegree = maxDegree;
  Expr e = parse(exprText);

  json record;
  record["expression"] = exprText;
  std::string text;
  if (haveAsym) {
    AsymptoticResult a = asymptotic(e, spec, asymOrder, opts);
    record["result"] = json{{"type", "series"},
                            {"symbol", a.symbol},
                            {"order", a.order},
                            {"text", a.str()}};
    text = a.str();
  } else {
    IntegrationResult r = integrate(e, spec, opts);
    if (haveOverride) {
      Scalar v = evaluate(r, dimOverride);
      record["symbolic_result"] = r.str();
      record["dim_override"] = dimOverride;
      IntegrationResult rv = IntegrationResult::exact(v);
      record["result"] = resultToJson(rv);
      text = v.str();
    } else {
      record["result"] = resultToJson(r);
      text = r.str();
    }
    if (!r.note.empty()) record["note"] = r.note;
    if (!r.enginePath.empty()) record["engine"] = r.enginePath;
  }
  if (!record.contains("engine")) record["engine"] = haveAsym ? "asymptotic" : "direct";
  record["measure"] = spec.str();
  record["dimension"] = spec.symbolicDim ? json(spec.dimSymbol) : json(spec.dim);
  record["degree"] = expressionDegree(e);
  record["cache_hits"] = WeingartenCache::instance().hits();
  record["elapsed_ms"] = elapsedMs(start);
  emitRecord(ctx, record, text);
}

void cmdAsymptotic(Ctx& ctx, const std::string& exprText, const std::string& symbol,
                   long order) {
  auto start = std::chrono::steady_clock::now();
  RationalFunction r = parseRationalFunction(exprText, symbol);
  AsymptoticResult a = asymptotic(r, symbol, order);
  json record;
  record["expression"] = exprText;
  record["result"] =
      json{{"type", "series"}, {"symbol", symbol}, {"order", order}, {"text", a.str()}};
  record["measure"] = "none";
  record["dimension"] = symbol;
  record["engine"] = "laurent";
  record["cache_hits"] = WeingartenCache::instance().hits();
  record["elapsed_ms"] = elapsedMs(start);
  emitRecord(ctx, record, a.str());
}

void cmdWg(Ctx& ctx, const std::string& family, int degree, long dim, bool haveDim) {
  auto start = std::chrono::steady_clock::now();
  json table = json::array();
  std::ostringstream text;
  if (degree < 0) throw InvalidInputError("degree must be >= 0");
  if (degree > 0) {
    for (const Partition& mu : partitionsOf(degree)) {
      std::string value;
      if (family == "U")
        value = haveDim ? Scalar(wgUnitary(mu, dim)).str() : wgUnitary(mu).str();
      else if (family == "O")
        value = haveDim ? Scalar(wgOrthogonalType(mu, dim)).str()
                        : wgOrthogonalType(mu).str();
      else if (family == "Sp")
        value = haveDim ? Scalar(wgSymplecticType(mu, dim)).str()
                        : wgSymplecticType(mu).str();
      else
        throw DispatchError("wg family must be U, O or Sp");
      table.push_back(json{{"type", mu.str()}, {"value", value}});
      text << mu.str() << ": " << value << "\n";
    }
  } else if (family != "U" && family != "O" && family != "Sp") {
    throw DispatchError("wg family must be U, O or Sp");
  }
  json record;
  record["result"] = table;
  record["measure"] = family;
  record["dimension"] = haveDim ? json(dim) : json("d");
  record["engine"] = "weingarten-table";
  record["degree"] = degree;
  record["cache_hits"] = WeingartenCache::instance().hits();
  record["elapsed_ms"] = elapsedMs(start);
  emitRecord(ctx, record, text.str());
}

std::vector<std::complex<double>> parseNumberList(const std::string& text) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.emplace_back(std::stod(tok), 0.0);
  }
  if (out.empty()) throw InvalidInputError("empty eigenvalue list");
  return out;
}

Eigen::MatrixXcd readMatrixJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open matrix file " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_array() || j.empty())
    throw InvalidInputError("matrix file must hold a row-major array of rows");
  long n = static_cast<long>(j.size());
  Eigen::MatrixXcd M(n, n);
  for (long i = 0; i < n; ++i) {
    if (static_cast<long>(j[static_cast<std::size_t>(i)].size()) != n)
      throw InvalidInputError("matrix file rows have inconsistent length");
    for (long k = 0; k < n; ++k)
      M(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  return M;
}

void cmdHciz(Ctx& ctx, const std::string& aList, const std::string& bList,
             const std::string& aFile, const std::string& bFile) {
  auto start = std::chrono::steady_clock::now();
  HcizValue v;
  if (!aFile.empty() || !bFile.empty()) {
    if (aFile.empty() || bFile.empty())
      throw InvalidInputError("hciz needs both --matrix-a and --matrix-b");
    v = hcizMatrices(readMatrixJson(aFile), readMatrixJson(bFile));
  } else {
    if (aList.empty() || bList.empty())
      throw InvalidInputError("hciz needs --a and --b eigenvalue lists (or matrix files)");
    v = hcizEigen(Spectrum::fromNumbers(parseNumberList(aList)),
                  Spectrum::fromNumbers(parseNumberList(bList)));
  }
  json record;
  record["result"] = v.str();
  record["measure"] = "U(" + std::to_string(v.dim) + ")";
  record["dimension"] = v.dim;
  record["engine"] = "hciz";
  record["cache_hits"] = WeingartenCache::instance().hits();
  record["elapsed_ms"] = elapsedMs(start);
  emitRecord(ctx, record, v.str());
}

struct BenchRow {
  std::string label;
  std::function<void()> run;
};

std::vector<BenchRow> benchSuite(const std::string& name) {
  EngineOptions opts;
  auto entry = [opts](const std::string& expr, const std::string& measure) {
    return [expr, measure, opts] {
      MeasureSpec spec = parseMeasure(measure);
      (void)integrate(parse(expr), spec, opts);
    };
  };
  std::vector<BenchRow> rows;
  if (name == "entry-moments") {
    rows.push_back({"U |U11|^6 symbolic", entry("abs(U[1,1])^6", "U(d)")});
    rows.push_back({"U |U11|^8 symbolic", entry("abs(U[1,1])^8", "U(d)")});
    rows.push_back({"U |U11|^10 symbolic", entry("abs(U[1,1])^10", "U(d)")});
    rows.push_back({"U |U11|^10 d=10", entry("abs(U[1,1])^10", "U(10)")});
    rows.push_back({"U |U11|^10 d=50", entry("abs(U[1,1])^10", "U(50)")});
  } else if (name == "orthogonal") {
    rows.push_back({"O O11^2 symbolic", entry("O[1,1]^2", "O(d)")});
    rows.push_back({"O O11^4 symbolic", entry("O[1,1]^4", "O(d)")});
    rows.push_back({"O O11^6 d=10", entry("O[1,1]^6", "O(10)")});
    rows.push_back({"O O11^8 d=20", entry("O[1,1]^8", "O(20)")});
    rows.push_back({"O O11^10 d=20", entry("O[1,1]^10", "O(20)")});
    rows.push_back({"O O11^10 d=50", entry("O[1,1]^10", "O(50)")});
  } else if (name == "symplectic") {
    rows.push_back({"Sp |Sp11|^8 d=10", entry("abs(Sp[1,1])^8", "Sp(10)")});
    rows.push_back({"Sp |Sp11|^10 d=10", entry("abs(Sp[1,1])^10", "Sp(10)")});
    rows.push_back({"Sp |Sp11|^10 d=20", entry("abs(Sp[1,1])^10", "Sp(20)")});
  } else if (name == "circular") {
    rows.push_back({"COE |S11|^2 symbolic", entry("abs(S[1,1])^2", "COE(d)")});
    rows.push_back({"COE |S11|^4 symbolic", entry("abs(S[1,1])^4", "COE(d)")});
    rows.push_back({"COE |S11|^6 symbolic", entry("abs(S[1,1])^6", "COE(d)")});
    rows.push_back({"CSE |S11|^2 symbolic", entry("abs(S[1,1])^2", "CSE(d)")});
    rows.push_back({"CSE |S11|^4 symbolic", entry("abs(S[1,1])^4", "CSE(d)")});
    rows.push_back({"CSE |S11|^6 symbolic", entry("abs(S[1,1])^6", "CSE(d)")});
  } else if (name == "permutation") {
    std::string prod = "P[1,1]";
    for (int i = 2; i <= 10; ++i)
      prod += " * P[" + std::to_string(i) + "," + std::to_string(i) + "]";
    rows.push_back({"Perm prod P_ii d=100", entry(prod, "Perm(100)")});
    rows.push_back({"CPerm Y11^4 d=10", entry("Y[1,1]^4", "CPerm(10)")});
  } else if (name == "ginue") {
    rows.push_back({"GinUE tr(GG') symbolic", entry("tr(G * G')", "GinUE(d)")});
    rows.push_back({"GinUE tr(GG') d=4", entry("tr(G * G')", "GinUE(4)")});
  } else if (name == "trace") {
    rows.push_back({"U tr(UAU'B) symbolic", entry("tr(U * A * U' * B)", "U(d)")});
    rows.push_back({"U |tr U|^4 d=10", entry("abs(tr(U))^4", "U(10)")});
  } else {
    throw DispatchError("unknown benchmark suite '" + name +
                        "'; available: entry-moments, orthogonal, symplectic, "
                        "circular, permutation, ginue, trace");
  }
  return rows;
}

void cmdBench(Ctx& ctx, const std::string& suite, int samples, int threads) {
  auto rows = benchSuite(suite);
  struct RowResult {
    std::string label;
    double medianMs;
  };
  auto measureRow = [samples](const BenchRow& row) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
      cacheClear();  // cold-cache semantics per sample
      auto t0 = std::chrono::steady_clock::now();
      row.run();
      times.push_back(elapsedMs(t0));
    }
    std::sort(times.begin(), times.end());
    std::size_t n = times.size();
    double median =
        n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    return median;
  };

  std::vector<RowResult> results(rows.size());
  if (threads > 1) {
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1))
          results[i] = {rows[i].label, measureRow(rows[i])};
      }));
    for (auto& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i)
      results[i] = {rows[i].label, measureRow(rows[i])};
  }

  if (ctx.json()) {
    json record;
    record["suite"] = suite;
    record["samples"] = samples;
    json arr = json::array();
    for (const auto& r : results)
      arr.push_back(json{{"row", r.label}, {"median_ms", r.medianMs}});
    record["rows"] = arr;
    ctx.out << record.dump(2) << "\n";
  } else {
    ctx.out << "suite,row,samples,median_ms\n";
    for (const auto& r : results)
      ctx.out << suite << "," << r.label << "," << samples << "," << r.medianMs << "\n";
  }
}

}  // namespace

json ratToJsonImpl(const RationalFunction& r) {
  json j;
  j["num"] = polyToJson(r.num());
  j["den"] = polyToJson(r.den());
  return j;
}

nlohmann::ordered_json ratToJson(const RationalFunction& r) { return ratToJsonImpl(r); }

RationalFunction ratFromJson(const nlohmann::json& j) {
  return RationalFunction(polyFromJson(j.at("num")), polyFromJson(j.at("den")));
}

CliResult runCli(const std::vector<std::string>& args) {
  CliResult res;
  Ctx ctx;

  CLI::App app{"exact symbolic integration over Haar measures and matrix ensembles"};
  app.require_subcommand(1);

  // integrate
  std::string exprText, measureText;
  long asymOrder = 0;
  long dimOverride = 0;
  bool cold = false;
  int maxDegree = 12;
  auto* integrateCmd = app.add_subcommand("integrate", "integrate an expression");
  integrateCmd->add_option("expression", exprText, "expression to average")->required();
  integrateCmd->add_option("--measure", measureText, "measure, e.g. U(d) or Sp(6)")
      ->required();
  auto* asymOpt = integrateCmd->add_option("--asymptotic", asymOrder,
                                           "expand the result to this 1/d order");
  auto* overrideOpt = integrateCmd->add_option("--dim-override", dimOverride,
                                               "evaluate the exact result at this dimension");
  integrateCmd->add_flag("--cold", cold, "clear memo caches first");
  integrateCmd->add_option("--max-degree", maxDegree, "engine degree guard (default 12)");

  // asymptotic
  std::string symbol = "d";
  long order = 0;
  auto* asymCmd = app.add_subcommand("asymptotic", "expand a rational expression");
  asymCmd->add_option("expression", exprText, "rational expression")->required();
  asymCmd->add_option("--symbol", symbol, "expansion symbol (default d)");
  asymCmd->add_option("--order", order, "truncation order")->required();

  // wg
  std::string wgFamily;
  int wgDegree = 0;
  long wgDim = 0;
  auto* wgCmd = app.add_subcommand("wg", "dump a Weingarten table");
  wgCmd->add_option("family", wgFamily, "U, O or Sp")->required();
  wgCmd->add_option("degree", wgDegree, "degree k")->required();
  auto* wgDimOpt = wgCmd->add_option("--dim", wgDim, "concrete dimension");

  // hciz
  std::string aList, bList, aFile, bFile;
  auto* hcizCmd = app.add_subcommand("hciz", "closed-form HCIZ integral");
  hcizCmd->add_option("--a", aList, "comma-separated eigenvalues of A");
  hcizCmd->add_option("--b", bList, "comma-separated eigenvalues of B");
  hcizCmd->add_option("--matrix-a", aFile, "JSON matrix file for A");
  hcizCmd->add_option("--matrix-b", bFile, "JSON matrix file for B");

  // bench
  std::string suite;
  int samples = 30;
  int threads = 1;
  auto* benchCmd = app.add_subcommand("bench", "run a benchmark suite (cold cache)");
  benchCmd->add_option("suite", suite, "suite name")->required();
  benchCmd->add_option("--samples", samples, "samples per row (default 30)");
  benchCmd->add_option("--threads", threads, "parallel rows");

  auto* clearCmd = app.add_subcommand("cache-clear", "clear all memo caches");

  app.add_option("--format", ctx.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  for (auto* sub :
       {integrateCmd, asymCmd, wgCmd, hcizCmd, benchCmd, clearCmd})
    sub->add_option("--format", ctx.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

  std::vector<const char*> argv;
  argv.push_back("haarint");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    res.out = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.err = std::string("argument error: ") + e.what() + "\n";
    res.exitCode = kExitParse;
    return res;
  }

  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    if (ctx.json()) {
      json j;
      j["error"] = msg;
      j["kind"] = kind;
      j["exit"] = code;
      res.err = j.dump(2) + "\n";
    } else {
      res.err = kind + ": " + msg + "\n";
    }
    res.exitCode = code;
  };

  try {
    if (integrateCmd->parsed()) {
      cmdIntegrate(ctx, exprText, measureText, asymOrder, asymOpt->count() > 0,
                   dimOverride, overrideOpt->count() > 0, cold, maxDegree);
    } else if (asymCmd->parsed()) {
      cmdAsymptotic(ctx, exprText, symbol, order);
    } else if (wgCmd->parsed()) {
      cmdWg(ctx, wgFamily, wgDegree, wgDim, wgDimOpt->count() > 0);
    } else if (hcizCmd->parsed()) {
      cmdHciz(ctx, aList, bList, aFile, bFile);
    } else if (benchCmd->parsed()) {
      cmdBench(ctx, suite, samples, threads);
    } else if (clearCmd->parsed()) {
      cacheClear();
      if (ctx.json())
        ctx.out << json{{"result", "cache cleared"}}.dump(2) << "\n";
      else
        ctx.out << "cache cleared\n";
    }
    res.out = ctx.out.str();
    return res;
  } catch (const ParseError& e) {
    fail(kExitParse, "parse error", e.what());
  } catch (const DispatchError& e) {
    fail(kExitDispatch, "dispatch error", e.what());
  } catch (const DimensionError& e) {
    fail(kExitDispatch, "measure error", e.what());
  } catch (const PoleError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const DegreeLimitError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const DesignOrderError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const SingularSystemError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const NotRationalError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const UnsupportedFormError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const DegenerateSpectrumError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const InvalidInputError& e) {
    fail(kExitEngine, "engine error", e.what());
  } catch (const Error& e) {
    fail(kExitInternal, "internal error", e.what());
  } catch (const std::exception& e) {
    fail(kExitInternal, "internal error", e.what());
  }
  return res;
}

}  // namespace haarint
