#include "wolffkit/quadrature.hpp"

#include "wolffkit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <vector>

namespace wolffkit {

std::string_view to_string(Status s) {
    switch (s) {
        case Status::converged: return "converged";
        case Status::diverges: return "diverges";
        case Status::undecided: return "undecided";
    }
    return "undecided";
}

namespace quad {

namespace {

// Kronrod abscissae on [0,1]; odd indices are the Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    Estimate est;
    bool operator<(const Interval& o) const {
        if (est.error != o.est.error) return est.error < o.est.error;
        return a > o.a;  // deterministic tie-break
    }
};

}  // namespace

std::string_view to_string(TailVerdict v) {
    switch (v) {
        case TailVerdict::converges: return "converges";
        case TailVerdict::diverges: return "diverges";
        case TailVerdict::undecided: return "undecided";
    }
    return "undecided";
}

Estimate gauss_kronrod15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fv;
    fv[0] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }
    double kronrod = fv[0] * kWgk[7];
    double gauss = fv[0] * kWg[3];
    double resabs = std::abs(fv[0]) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double sum = fv[1 + 2 * j] + fv[2 + 2 * j];
        kronrod += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv[1 + 2 * j]) + std::abs(fv[2 + 2 * j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kWgk[7] * std::abs(fv[0] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[1 + 2 * j] - mean) + std::abs(fv[2 + 2 * j] - mean));

    // QUADPACK's scaling of |K15 - G7|: the raw difference overstates the
    // Kronrod error by orders of magnitude on smooth integrands
    const double scale = std::abs(half);
    resabs *= scale;
    resasc *= scale;
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    return {kronrod * half, err};
}

Rule15 gk15_rule(double a, double b) {
    Rule15 r{};
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    r.nodes[0] = center;
    r.kronrod[0] = kWgk[7] * half;
    r.gauss[0] = kWg[3] * half;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        r.nodes[1 + 2 * j] = center - dx;
        r.nodes[2 + 2 * j] = center + dx;
        r.kronrod[1 + 2 * j] = r.kronrod[2 + 2 * j] = kWgk[j] * half;
        const double wg = (j % 2 == 1) ? kWg[j / 2] * half : 0.0;
        r.gauss[1 + 2 * j] = r.gauss[2 + 2 * j] = wg;
    }
    return r;
}

Estimate composite_gk15(const Integrand& f, double a, double b, int panels) {
    Estimate total;
    if (panels < 1 || !(b > a)) return total;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
        const Estimate e = gauss_kronrod15(f, lo, hi);
        total.value += e.value;
        total.error += e.error;
    }
    return total;
}

AdaptiveResult adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                        int max_intervals) {
    AdaptiveResult out;
    if (!(b > a)) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Interval> heap;
    Estimate first = gauss_kronrod15(f, a, b);
    heap.push({a, b, first});
    double value = first.value;
    double error = first.error;
    int count = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) && count < max_intervals) {
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // cannot split further
            heap.push(worst);
            break;
        }
        Estimate left = gauss_kronrod15(f, worst.a, mid);
        Estimate right = gauss_kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});
        ++count;
    }
    // re-sum in interval order so the result does not depend on heap history
    std::vector<Interval> parts;
    parts.reserve(heap.size());
    while (!heap.empty()) {
        parts.push_back(heap.top());
        heap.pop();
    }
    std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (const auto& p : parts) {
        out.value += p.est.value;
        out.error += p.est.error;
    }
    out.intervals = count;
    out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
    return out;
}

AdaptiveResult adaptive_pieces(const Integrand& f, std::span<const double> cuts, double abs_tol,
                               double rel_tol, int max_intervals_per_piece) {
    AdaptiveResult total;
    total.converged = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        const AdaptiveResult piece =
            adaptive(f, cuts[i], cuts[i + 1], abs_tol, rel_tol, max_intervals_per_piece);
        total.value += piece.value;
        total.error += piece.error;
        total.intervals += piece.intervals;
        total.converged = total.converged && piece.converged;
    }
    return total;
}

SeriesResult sum_dyadic_panels(const std::function<PanelValue(int)>& panel, const SeriesOptions& options) {
    SeriesResult out;
    std::deque<double> recent;
    double total = 0.0;
    double error = 0.0;
    double last = 0.0;
    int run = 0;

    auto finish_exhausted = [&](std::string why) {
        if (run >= options.nondecreasing_run) {
            out.status = Status::diverges;
            out.value = std::numeric_limits<double>::infinity();
            out.error = std::numeric_limits<double>::infinity();
            out.diagnostic = why + "; contributions non-decreasing over the last " +
                             std::to_string(run) + " panels";
        } else {
            out.status = Status::undecided;
            out.value = total;
            out.error = error;
            out.diagnostic = why + "; tail neither decays nor grows";
        }
        return out;
    };

    for (int k = 1; k <= options.max_panels; ++k) {
        PanelValue pv;
        try {
            pv = panel(k);
        } catch (const OverflowError&) {
            return finish_exhausted("floating-point range exhausted at panel " + std::to_string(k));
        }
        if (!std::isfinite(pv.value)) {
            return finish_exhausted("non-finite contribution at panel " + std::to_string(k));
        }
        total += pv.value;
        error += pv.error;
        out.panels = k;

        if (pv.rest_vanishes) {
            out.status = Status::converged;
            out.value = total;
            out.error = error;
            return out;
        }

        if (pv.value > 0.0 && k > 1 && pv.value >= last * (1.0 - 1e-12)) {
            ++run;
        } else {
            run = pv.value > 0.0 ? 1 : 0;
        }
        last = pv.value;

        if (run >= options.nondecreasing_run && total > options.divergence_threshold) {
            out.status = Status::diverges;
            out.value = std::numeric_limits<double>::infinity();
            out.error = std::numeric_limits<double>::infinity();
            out.diagnostic = "partial sums exceeded the divergence threshold";
            return out;
        }

        recent.push_back(pv.value);
        if (recent.size() > 3) recent.pop_front();
        if (recent.size() < 3) continue;

        const double scale = std::max(1.0, std::abs(total));
        const double budget = options.tol * scale;
        if (!std::all_of(recent.begin(), recent.end(), [&](double c) { return std::abs(c) <= budget; }))
            continue;
        double tail = 0.0;
        if (recent[2] != 0.0 || recent[1] != 0.0 || recent[0] != 0.0) {
            double ratio = 0.0;
            if (recent[1] > 0.0) ratio = std::max(ratio, recent[2] / recent[1]);
            else if (recent[2] > 0.0) ratio = 1.0;
            if (recent[0] > 0.0) ratio = std::max(ratio, recent[1] / recent[0]);
            else if (recent[1] > 0.0) ratio = 1.0;
            if (!(ratio < 1.0)) continue;
            tail = recent[2] * ratio / (1.0 - ratio);
        }
        if (tail + error <= budget) {
            out.status = Status::converged;
            out.value = total + tail;
            out.error = error + tail;
            return out;
        }
    }
    return finish_exhausted("panel budget of " + std::to_string(options.max_panels) + " exhausted");
}

TailClassification classify_dyadic_tail(const std::function<double(int)>& contribution, int depth) {
    TailClassification out;
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(depth));
    for (int k = 0; k < depth; ++k) {
        double v = 0.0;
        try {
            v = contribution(k);
        } catch (const OverflowError&) {
            break;
        }
        if (!std::isfinite(v)) break;
        c.push_back(std::max(v, 0.0));
    }
    const int K = static_cast<int>(c.size());
    out.panels = K;
    if (K < 32) return out;

    const int window = std::min(16, K / 4);
    if (std::all_of(c.end() - window, c.end(), [](double v) { return v == 0.0; })) {
        out.verdict = TailVerdict::converges;
        out.growth_rate = -std::numeric_limits<double>::infinity();
        return out;
    }
    double slope = 0.0;
    int used = 0;
    for (int k = K - window; k < K; ++k) {
        if (c[k] > 0.0 && c[k - 1] > 0.0) {
            slope += std::log2(c[k] / c[k - 1]);
            ++used;
        }
    }
    if (used == 0) return out;
    slope /= used;
    out.growth_rate = slope;
    constexpr double kRateMargin = 0.05;
    if (slope > kRateMargin) {
        out.verdict = TailVerdict::diverges;
        return out;
    }
    if (slope < -kRateMargin) {
        out.verdict = TailVerdict::converges;
        return out;
    }

    // c_k regularly varying in k: least-squares slope of log c_k against log k.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = K / 4; k < K; ++k) {
        if (c[k] <= 0.0) continue;
        const double x = std::log(static_cast<double>(k + 1));
        const double y = std::log(c[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 8) return out;
    const double gamma = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.log_decay = gamma;
    if (gamma < 0.95) out.verdict = TailVerdict::diverges;
    else if (gamma > 1.05) out.verdict = TailVerdict::converges;
    return out;
}

}  // namespace quad
}  // namespace wolffkit
