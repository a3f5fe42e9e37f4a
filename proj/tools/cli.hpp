#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kcert/kcert.hpp"

namespace kcert::cli {

enum ExitCode : int { kAccept = 0, kReject = 1, kUsage = 2 };

/// Bad command line or unusable input; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProtocolChoice {
  std::string protocol = "seq-single";
  u64 delta = 0;
  u64 stride = 0;
  u64 levels = 0;
  std::string variant;
  u64 projections = 1;
  u64 seed = 0;
};

inline SequenceProtocol parse_inner(const std::string& variant, u64 stride, u64 levels) {
  if (variant.empty() || variant == "single") return {SequenceKind::SeqSingle, 0};
  if (variant == "log") return {SequenceKind::SeqLog, 0};
  if (variant == "checkpoint") return {SequenceKind::Checkpoint, stride};
  if (variant == "dense") return {SequenceKind::Dense, stride};
  if (variant == "klevel") return {SequenceKind::KLevel, levels ? levels : 2};
  throw UsageError("unknown --variant '" + variant + "' (log, single, checkpoint, dense, klevel)");
}

inline PowerVariant parse_power_variant(const std::string& variant, PowerVariant fallback) {
  if (variant.empty()) return fallback;
  if (variant == "log") return PowerVariant::Log;
  if (variant == "single") return PowerVariant::Single;
  throw UsageError("--variant must be log or single for this protocol");
}

/// Protocol names: checkpoint, dense, klevel[:k], seq-log, seq-single,
/// power-log, power-single, combination, minpoly, det, charpoly.
inline ProtocolConfig parse_protocol(const ProtocolChoice& c) {
  ProtocolConfig cfg;
  cfg.delta = c.delta;
  cfg.nonce = c.seed;
  cfg.projections = c.projections;
  const std::string& name = c.protocol;
  if (name == "checkpoint" || name == "dense") {
    cfg.protocol = name == "checkpoint" ? ProtocolTag::Checkpoint : ProtocolTag::Dense;
    cfg.param = c.stride;
  } else if (name == "klevel" || name.rfind("klevel:", 0) == 0) {
    cfg.protocol = ProtocolTag::KLevel;
    cfg.param = c.levels ? c.levels : 2;
    if (name.size() > 7) {
      const std::string k = name.substr(7);
      if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || k.size() > 2) {
        throw UsageError("bad level count in '" + name + "'");
      }
      cfg.param = std::stoull(k);
    }
  } else if (name == "seq-log" || name == "seq-single") {
    cfg.protocol = ProtocolTag::Sequence;
    cfg.variant = name == "seq-log" ? PowerVariant::Log : PowerVariant::Single;
  } else if (name == "power-log") {
    cfg.protocol = ProtocolTag::PowerLog;
  } else if (name == "power-single") {
    cfg.protocol = ProtocolTag::PowerSingle;
  } else if (name == "combination") {
    cfg.protocol = ProtocolTag::Combination;
    cfg.variant = parse_power_variant(c.variant, PowerVariant::Single);
  } else if (name == "minpoly" || name == "det" || name == "charpoly") {
    cfg.protocol = name == "minpoly" ? ProtocolTag::MinPoly : name == "det" ? ProtocolTag::Det : ProtocolTag::CharPoly;
    cfg.inner = parse_inner(c.variant, c.stride, c.levels);
  } else {
    throw UsageError("unknown protocol '" + name + "'");
  }
  return cfg;
}

inline u64 sample_set_from_env() {
  const char* v = std::getenv("KCERT_SAMPLE_SET");
  if (v == nullptr || *v == '\0') return 0;
  const std::string s(v);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19) {
    throw UsageError("KCERT_SAMPLE_SET must be a positive integer");
  }
  return std::stoull(s);
}

/// Predicted Verifier field operations for a resolved configuration.
inline double predicted_cost(const ProtocolConfig& c, u64 n, u64 mu) {
  auto inner_cost = [&](const SequenceProtocol& p, u64 delta) -> double {
    switch (p.kind) {
      case SequenceKind::Checkpoint:
        return static_cast<double>(checkpoint_cost_bound(n, delta, mu, p.param ? p.param : choose_K(n, delta, mu)));
      case SequenceKind::Dense:
        return static_cast<double>(dense_cost_bound(n, delta, mu, p.param ? p.param : choose_K_dense(delta)));
      case SequenceKind::KLevel: {
        const LevelSchedule s = level_schedule(p.param, std::max<u64>(n, 2));
        std::vector<u64> strides(s.strides.rbegin(), s.strides.rend());
        return static_cast<double>(klevel_cost_bound(n, klevel_delta(delta, strides), mu, strides));
      }
      case SequenceKind::SeqLog: return sequence_log_cost_bound(n, sequence_degree(delta), mu);
      case SequenceKind::SeqSingle: return sequence_single_cost_bound(n, sequence_degree(delta), mu);
    }
    return 0;
  };
  switch (c.protocol) {
    case ProtocolTag::Checkpoint: return inner_cost({SequenceKind::Checkpoint, c.param}, c.delta);
    case ProtocolTag::Dense: return inner_cost({SequenceKind::Dense, c.param}, c.delta);
    case ProtocolTag::KLevel: return inner_cost({SequenceKind::KLevel, c.param}, c.delta);
    case ProtocolTag::PowerLog: return power_log_cost_bound(n, c.delta, mu);
    case ProtocolTag::PowerSingle: return power_single_cost_bound(n, c.delta, mu);
    case ProtocolTag::Sequence:
    case ProtocolTag::Combination:
      return inner_cost({c.variant == PowerVariant::Log ? SequenceKind::SeqLog : SequenceKind::SeqSingle, 0},
                        c.delta);
    case ProtocolTag::MinPoly:
    case ProtocolTag::Det:
    case ProtocolTag::CharPoly: return inner_cost(c.inner, 2 * n);
  }
  return 0;
}

inline void print_report(std::ostream& out, const SparseMatrix& a, const ProtocolConfig& cfg, const RunResult& r) {
  const PrimeField field(a.modulus(), cfg.sample_set_size);
  out << "protocol: " << protocol_name(cfg.protocol) << " (n=" << a.dimension() << ", p=" << a.modulus()
      << ", |S|=" << field.sample_set_size() << ", mu=" << a.mu() << ")\n";
  out << "outcome: " << r.outcome << '\n';
  if (r.value) out << "det: " << *r.value << '\n';
  if (r.polynomial) out << "polynomial (ascending coefficients): " << *r.polynomial << '\n';
  out << r.ledger << '\n';
  const double predicted = predicted_cost(resolve(cfg, a), a.dimension(), a.mu());
  out << "bound_check: verifier_field_ops predicted=" << std::llround(predicted)
      << " measured=" << r.ledger.verifier.field_ops << '\n';
}

inline Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("write failed for " + path);
}

inline SparseMatrix load(const std::string& path) {
  try {
    return load_matrix(path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

struct GenOptions {
  u64 n = 0;
  u64 nnz_per_row = 3;
  u64 modulus = kMersenne61;
  u64 seed = 0;
  std::string out;
};

inline int cmd_gen(const GenOptions& o, std::ostream& out) {
  if (o.n == 0) throw UsageError("--n must be positive");
  if (o.nnz_per_row < 1 || o.nnz_per_row > o.n) throw UsageError("--nnz-per-row must be in [1, n]");
  const PrimeField field(o.modulus);
  store_matrix(o.out, random_sparse(o.n, o.nnz_per_row, field, o.seed));
  out << "wrote " << o.out << '\n';
  return kAccept;
}

struct ProveOptions {
  std::string matrix;
  std::string out;
  std::optional<u64> modulus;
  ProtocolChoice choice;
};

inline int cmd_prove(const ProveOptions& o, std::ostream& out) {
  const SparseMatrix a = load(o.matrix);
  if (o.modulus && *o.modulus != a.modulus()) throw UsageError("--modulus differs from the matrix file");
  ProtocolConfig cfg = parse_protocol(o.choice);
  cfg.sample_set_size = sample_set_from_env();
  RunResult r = [&] {
    try {
      return prove(a, cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  write_file(o.out, r.transcript.serialize());
  print_report(out, a, cfg, r);
  out << "transcript: " << o.out << '\n';
  return r.outcome.accepted() ? kAccept : kReject;
}

struct VerifyOptions {
  std::string matrix;
  std::string transcript;
};

inline int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const SparseMatrix a = load(o.matrix);
  const Bytes bytes = read_file(o.transcript);
  RunResult r = [&] {
    try {
      return verify_transcript(a, bytes);
    } catch (const TranscriptError& e) {
      throw UsageError(std::string("invalid transcript: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("invalid transcript: ") + e.what());
    }
  }();
  print_report(out, a, config_from_header(r.transcript.header(), a), r);
  return r.outcome.accepted() ? kAccept : kReject;
}

struct BenchOptions {
  ProtocolChoice choice;
  std::vector<u64> sizes;
  u64 nnz_per_row = 3;
  u64 modulus = kMersenne61;
  std::string out;
};

inline const char* kBenchHeader = "protocol,n,role,field_ops,matvecs,comm,predicted_bound,slope";

/// One Verifier row per size; the slope column is the log-log regression of
/// Verifier field operations over the whole sweep.
inline int cmd_bench(const BenchOptions& o, std::ostream& out) {
  struct Row {
    u64 n;
    CostLedger ledger;
    double predicted;
  };
  std::vector<Row> rows;
  const PrimeField field(o.modulus);
  for (u64 n : o.sizes) {
    if (n == 0 || o.nnz_per_row > n) throw UsageError("every size must be >= --nnz-per-row");
    const SparseMatrix a = random_sparse(n, o.nnz_per_row, field, o.choice.seed + n);
    ProtocolConfig cfg = parse_protocol(o.choice);
    cfg.sample_set_size = sample_set_from_env();
    RunResult r = [&] {
      try {
        return prove(a, cfg);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }();
    rows.push_back({n, r.ledger, predicted_cost(resolve(cfg, a), n, a.mu())});
  }
  std::vector<double> xs, ys;
  for (const Row& r : rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(static_cast<double>(std::max<u64>(r.ledger.verifier.field_ops, 1)));
  }
  const double slope = loglog_slope(xs, ys);

  std::ostringstream csv;
  csv << kBenchHeader << '\n';
  for (const Row& r : rows) {
    csv << o.choice.protocol << ',' << r.n << ",verifier," << r.ledger.verifier.field_ops << ','
        << r.ledger.verifier.applications() << ',' << r.ledger.comm_field_elements << ',' << std::llround(r.predicted)
        << ',';
    if (!std::isnan(slope)) csv << std::fixed << std::setprecision(4) << slope << std::defaultfloat;
    csv << '\n';
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    const std::string s = csv.str();
    write_file(o.out, Bytes(s.begin(), s.end()));
  }
  return kAccept;
}

inline void add_protocol_flags(CLI::App& cmd, ProtocolChoice& c) {
  cmd.add_option("--protocol", c.protocol,
                 "checkpoint | dense | klevel:k | seq-log | seq-single | power-log | power-single | combination | "
                 "minpoly | det | charpoly");
  cmd.add_option("--delta", c.delta, "sequence length delta (default 2n)");
  cmd.add_option("--K", c.stride, "checkpoint stride (default: optimal)");
  cmd.add_option("--levels", c.levels, "depth k of the k-level protocol");
  cmd.add_option("--variant", c.variant, "power variant (log | single) or inner protocol for applications");
  cmd.add_option("--projections", c.projections, "projections combined by lcm (minpoly)");
  cmd.add_option("--seed", c.seed, "seed / Fiat-Shamir nonce");
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interactive certificates for Krylov sequences over GF(p)", "kcert"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "write a random sparse matrix");
  g->add_option("--n", gen.n, "dimension")->required();
  g->add_option("--nnz-per-row", gen.nnz_per_row, "nonzeros per row");
  g->add_option("--modulus", gen.modulus, "prime modulus (default 2^61-1)");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "output matrix file")->required();

  ProveOptions prove_opts;
  std::optional<u64> prove_modulus;
  auto* p = app.add_subcommand("prove", "run the honest Prover and write a Fiat-Shamir transcript");
  p->add_option("--matrix", prove_opts.matrix, "matrix file")->required();
  p->add_option("--out", prove_opts.out, "transcript file")->required();
  p->add_option("--modulus", prove_modulus, "expected modulus of the matrix file");
  add_protocol_flags(*p, prove_opts.choice);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "check a transcript against a matrix file");
  v->add_option("--matrix", verify.matrix, "matrix file")->required();
  v->add_option("--transcript,--in", verify.transcript, "transcript file")->required();

  BenchOptions bench;
  std::string sizes = "64,256,1024";
  auto* b = app.add_subcommand("bench", "cost sweep over n, CSV output");
  add_protocol_flags(*b, bench.choice);
  b->add_option("--sizes", sizes, "comma-separated dimensions (empty for none)");
  b->add_option("--nnz-per-row", bench.nnz_per_row, "nonzeros per row");
  b->add_option("--modulus", bench.modulus, "prime modulus (default 2^61-1)");
  b->add_option("--out", bench.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (p->parsed()) {
      prove_opts.modulus = prove_modulus;
      return cmd_prove(prove_opts, out);
    }
    if (v->parsed()) return cmd_verify(verify, out);
    if (b->parsed()) {
      std::stringstream ss(sizes);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9) {
          throw UsageError("bad size '" + item + "'");
        }
        bench.sizes.push_back(std::stoull(item));
      }
      return cmd_bench(bench, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace kcert::cli
