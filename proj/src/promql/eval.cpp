#include "slokit/promql/eval.hpp"

#include <algorithm>
#include <cmath>

#include "slokit/common/numfmt.hpp"

namespace slokit::promql {

namespace {

using metrics::Sample;
using metrics::SeriesKey;

class Evaluator {
public:
    Evaluator(std::int64_t t_ms, const metrics::TimeSeriesStore& store, const EvalOptions& opts)
        : t_(t_ms), store_(store), opts_(opts) {}

    QueryValue eval(const Expr& e) {
        return std::visit(
            [&](const auto& n) -> QueryValue {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, NumberLiteral>) {
                    return {n.value};
                } else if constexpr (std::is_same_v<T, VectorSelector>) {
                    return {eval_selector(n)};
                } else if constexpr (std::is_same_v<T, RangeSelector>) {
                    return {eval_range_selector(n)};
                } else if constexpr (std::is_same_v<T, FnCall>) {
                    return eval_fn(n);
                } else if constexpr (std::is_same_v<T, AggregateExpr>) {
                    return {eval_aggregate(n)};
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return eval_binary(n);
                } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                    return eval_neg(n);
                } else {
                    return eval(*n.inner);
                }
            },
            e.node);
    }

private:
    std::int64_t t_;
    const metrics::TimeSeriesStore& store_;
    const EvalOptions& opts_;

    InstantVector eval_selector(const VectorSelector& sel) {
        auto matcher = to_series_matcher(sel);
        auto ranged = store_.select_range(matcher, t_ - opts_.lookback_ms, t_);
        InstantVector out;
        for (const auto& [key, samples] : ranged)
            if (!samples.empty()) out.emplace(key, samples.back().value);
        return out;
    }

    Matrix eval_range_selector(const RangeSelector& sel) {
        auto matcher = to_series_matcher(sel.inner);
        return store_.select_range(matcher, t_ - sel.window_ms, t_);
    }

    // Shared delta sum: consecutive positive deltas, counter resets
    // contributing the post-reset value. NaN samples are treated as absent.
    static std::optional<double> reset_aware_delta_sum(const std::vector<Sample>& samples) {
        double sum = 0;
        int seen = 0;
        double prev = 0;
        for (const auto& s : samples) {
            if (std::isnan(s.value)) continue;
            if (seen > 0) {
                double delta = s.value - prev;
                sum += delta < 0 ? s.value : delta;
            }
            prev = s.value;
            ++seen;
        }
        if (seen < 2) return std::nullopt;
        return sum;
    }

    QueryValue eval_fn(const FnCall& call) {
        switch (call.fn) {
            case FnName::rate:
            case FnName::increase: {
                if (call.args.size() != 1) throw EvalError("rate/increase expects one argument");
                const auto* rs = std::get_if<RangeSelector>(&call.args[0]->node);
                if (!rs) throw EvalError("rate/increase expects a range selector argument");
                const double window_s = static_cast<double>(rs->window_ms) / 1000.0;
                Matrix m = eval_range_selector(*rs);
                InstantVector out;
                for (const auto& [key, samples] : m) {
                    auto sum = reset_aware_delta_sum(samples);
                    if (!sum) continue;
                    double rate = *sum / window_s;
                    out.emplace(key.without_name(),
                                call.fn == FnName::rate ? rate : rate * window_s);
                }
                return {out};
            }
            case FnName::histogram_quantile: {
                double q = expect_scalar(eval(*call.args[0]), "histogram_quantile quantile");
                QueryValue vv = eval(*call.args[1]);
                if (!vv.is_vector()) throw EvalError("histogram_quantile expects an instant vector");
                return {histogram_quantile(q, vv.vector())};
            }
            case FnName::clamp_min:
            case FnName::clamp_max: {
                QueryValue vv = eval(*call.args[0]);
                double bound = expect_scalar(eval(*call.args[1]), "clamp bound");
                if (!vv.is_vector()) throw EvalError("clamp expects an instant vector");
                InstantVector out;
                for (const auto& [key, v] : vv.vector())
                    out.emplace(key.without_name(), call.fn == FnName::clamp_min
                                                        ? std::max(v, bound)
                                                        : std::min(v, bound));
                return {out};
            }
        }
        throw EvalError("unknown function");
    }

    static double expect_scalar(const QueryValue& v, const char* what) {
        if (!v.is_scalar()) throw EvalError(std::string(what) + " must be a scalar");
        return v.scalar();
    }

    static InstantVector histogram_quantile(double q, const InstantVector& buckets) {
        struct Bucket {
            double le;
            double cum;
        };
        std::map<SeriesKey, std::vector<Bucket>> groups;
        for (const auto& [key, v] : buckets) {
            auto le_label = key.label("le");
            if (!le_label) continue;
            auto le = slokit::parse_double(*le_label);
            if (!le || std::isnan(*le) || std::isnan(v)) continue;
            groups[key.without_name().drop_labels({"le"})].push_back({*le, v});
        }
        InstantVector out;
        for (auto& [gkey, bs] : groups) {
            std::sort(bs.begin(), bs.end(), [](const Bucket& a, const Bucket& b) { return a.le < b.le; });
            if (bs.empty() || !std::isinf(bs.back().le)) continue;
            // enforce cumulative monotonicity
            for (std::size_t i = 1; i < bs.size(); ++i) bs[i].cum = std::max(bs[i].cum, bs[i - 1].cum);
            const double total = bs.back().cum;
            if (!(total > 0)) continue;
            const double rank = q * total;
            std::size_t idx = 0;
            while (idx + 1 < bs.size() && bs[idx].cum < rank) ++idx;
            double result;
            if (idx == bs.size() - 1) {
                // rank falls into the +Inf bucket: report the last finite bound
                if (bs.size() < 2) continue;
                result = bs[bs.size() - 2].le;
            } else {
                double lower, prev_cum;
                if (idx == 0) {
                    if (bs[0].le <= 0) {
                        out.emplace(gkey, bs[0].le);
                        continue;
                    }
                    lower = 0;
                    prev_cum = 0;
                } else {
                    lower = bs[idx - 1].le;
                    prev_cum = bs[idx - 1].cum;
                }
                double in_bucket = bs[idx].cum - prev_cum;
                result = in_bucket <= 0
                             ? bs[idx].le
                             : lower + (bs[idx].le - lower) * (rank - prev_cum) / in_bucket;
            }
            out.emplace(gkey, result);
        }
        return out;
    }

    InstantVector eval_aggregate(const AggregateExpr& agg) {
        QueryValue av = eval(*agg.arg);
        if (!av.is_vector()) throw EvalError("aggregation expects an instant vector");
        struct Acc {
            double sum = 0;
            double mn = 0;
            double mx = 0;
            std::size_t count = 0;
        };
        std::map<SeriesKey, Acc> groups;
        for (const auto& [key, v] : av.vector()) {
            if (std::isnan(v)) continue; // NaN samples are excluded from aggregation
            SeriesKey gkey;
            switch (agg.grouping) {
                case Grouping::none: gkey = SeriesKey(); break;
                case Grouping::by: gkey = key.keep_labels(agg.labels); break;
                case Grouping::without: gkey = key.without_name().drop_labels(agg.labels); break;
            }
            auto& acc = groups[gkey];
            if (acc.count == 0) {
                acc.mn = v;
                acc.mx = v;
            } else {
                acc.mn = std::min(acc.mn, v);
                acc.mx = std::max(acc.mx, v);
            }
            acc.sum += v;
            ++acc.count;
        }
        InstantVector out;
        for (const auto& [gkey, acc] : groups) {
            double v = 0;
            switch (agg.op) {
                case AggOp::sum: v = acc.sum; break;
                case AggOp::avg: v = acc.sum / static_cast<double>(acc.count); break;
                case AggOp::min: v = acc.mn; break;
                case AggOp::max: v = acc.mx; break;
                case AggOp::count: v = static_cast<double>(acc.count); break;
            }
            out.emplace(gkey, v);
        }
        return out;
    }

    static double apply_arith(BinOp op, double a, double b) {
        switch (op) {
            case BinOp::add: return a + b;
            case BinOp::sub: return a - b;
            case BinOp::mul: return a * b;
            case BinOp::div: return a / b; // IEEE semantics for /0
            default: throw EvalError("not an arithmetic operator");
        }
    }

    static bool apply_cmp(BinOp op, double a, double b) {
        switch (op) {
            case BinOp::gt: return a > b;
            case BinOp::lt: return a < b;
            case BinOp::ge: return a >= b;
            case BinOp::le: return a <= b;
            case BinOp::eq: return a == b;
            case BinOp::ne: return a != b;
            default: throw EvalError("not a comparison operator");
        }
    }

    QueryValue eval_binary(const BinaryExpr& bin) {
        QueryValue lv = eval(*bin.lhs);
        QueryValue rv = eval(*bin.rhs);
        if (lv.is_matrix() || rv.is_matrix())
            throw EvalError("binary operators do not apply to range vectors");
        const bool cmp = is_comparison(bin.op);

        if (lv.is_scalar() && rv.is_scalar()) {
            if (!cmp) return {apply_arith(bin.op, lv.scalar(), rv.scalar())};
            if (!bin.bool_modifier)
                throw EvalError("comparisons between scalars must use the bool modifier");
            return {apply_cmp(bin.op, lv.scalar(), rv.scalar()) ? 1.0 : 0.0};
        }

        if (lv.is_vector() && rv.is_vector()) {
            // one-to-one matching on identical label sets, metric name dropped
            std::map<SeriesKey, double> rhs;
            for (const auto& [key, v] : rv.vector()) {
                auto [it, fresh] = rhs.emplace(key.without_name(), v);
                if (!fresh) throw EvalError("many-to-one vector matching is not supported");
            }
            InstantVector out;
            for (const auto& [key, v] : lv.vector()) {
                auto it = rhs.find(key.without_name());
                if (it == rhs.end()) continue;
                if (!cmp) {
                    if (!out.emplace(key.without_name(), apply_arith(bin.op, v, it->second)).second)
                        throw EvalError("duplicate series after dropping metric name");
                } else if (bin.bool_modifier) {
                    if (!out.emplace(key.without_name(),
                                     apply_cmp(bin.op, v, it->second) ? 1.0 : 0.0)
                             .second)
                        throw EvalError("duplicate series after dropping metric name");
                } else if (apply_cmp(bin.op, v, it->second)) {
                    out.emplace(key, v); // filter keeps the original series identity
                }
            }
            return {out};
        }

        // scalar <op> vector broadcast
        const bool scalar_left = lv.is_scalar();
        double s = scalar_left ? lv.scalar() : rv.scalar();
        const InstantVector& vec = scalar_left ? rv.vector() : lv.vector();
        InstantVector out;
        for (const auto& [key, v] : vec) {
            double a = scalar_left ? s : v;
            double b = scalar_left ? v : s;
            if (!cmp) {
                out.emplace(key.without_name(), apply_arith(bin.op, a, b));
            } else if (bin.bool_modifier) {
                out.emplace(key.without_name(), apply_cmp(bin.op, a, b) ? 1.0 : 0.0);
            } else if (apply_cmp(bin.op, a, b)) {
                out.emplace(key, v);
            }
        }
        return {out};
    }

    QueryValue eval_neg(const UnaryNeg& neg) {
        QueryValue v = eval(*neg.arg);
        if (v.is_scalar()) return {-v.scalar()};
        if (v.is_vector()) {
            InstantVector out;
            for (const auto& [key, val] : v.vector()) out.emplace(key.without_name(), -val);
            return {out};
        }
        throw EvalError("cannot negate a range vector");
    }
};

} // namespace

QueryValue eval_instant(const Expr& expr, std::int64_t t_ms, const metrics::TimeSeriesStore& store,
                        const EvalOptions& opts) {
    Evaluator ev(t_ms, store, opts);
    return ev.eval(expr);
}

Matrix eval_range(const Expr& expr, std::int64_t start, std::int64_t end, std::int64_t step,
                  const metrics::TimeSeriesStore& store, const EvalOptions& opts) {
    if (start > end) throw EvalError("eval_range: start > end");
    if (step <= 0) throw EvalError("eval_range: step must be positive");
    Matrix out;
    for (std::int64_t t = start; t <= end; t += step) {
        QueryValue v = eval_instant(expr, t, store, opts);
        if (v.is_scalar()) {
            out[SeriesKey()].push_back({t, v.scalar()});
        } else if (v.is_vector()) {
            for (const auto& [key, val] : v.vector()) out[key].push_back({t, val});
        } else {
            throw EvalError("eval_range requires a scalar or instant-vector expression");
        }
    }
    return out;
}

QueryValue eval_instant(std::string_view query, std::int64_t t_ms,
                        const metrics::TimeSeriesStore& store, const EvalOptions& opts) {
    ParseResult pr = parse(query);
    if (!pr.ok()) {
        std::string msg = "query parse failed: ";
        for (const auto& d : pr.diagnostics) msg += d.message + "; ";
        throw EvalError(msg);
    }
    auto diags = typecheck(*pr.expr);
    if (has_errors(diags)) {
        std::string msg = "query type check failed: ";
        for (const auto& d : diags)
            if (d.severity == Severity::error) msg += d.message + "; ";
        throw EvalError(msg);
    }
    return eval_instant(*pr.expr, t_ms, store, opts);
}

double scalarize(const QueryValue& value) {
    if (value.is_scalar()) return value.scalar();
    if (value.is_matrix()) throw EvalError("cannot scalarize a range vector");
    double sum = 0;
    for (const auto& [_, v] : value.vector()) sum += v;
    return sum;
}

} // namespace slokit::promql
