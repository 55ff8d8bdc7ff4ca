#pragma once

// Reduces intra-year profiles to weighted representative periods before any
// LP is assembled, preserving each profile's annual total exactly.
//
// Clustering is k-medoids grown incrementally: medoids are added greedily one
// at a time, with a PAM swap phase after each addition. The greedy/swap
// construction uses only comparisons and exact arithmetic on the input
// values, so results are deterministic across runs and platforms, and the
// clustering objective is nonincreasing in k by construction (a larger k
// continues from the smaller k's medoid set).

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "recopt/core.hpp"
#include "recopt/system_model.hpp"

namespace recopt {

struct TypicalPeriodSet {
    int period_length = 24;
    int k = 0;
    int steps_per_year = 0;
    std::vector<int> weights;       // occurrences per representative, sums to period count
    std::vector<int> assignment;    // original period -> representative index
    std::map<std::string, std::vector<std::vector<double>>> representatives;
    // representatives[profile][rep] is a period_length-long slice, rescaled so
    // the weighted annual sum reproduces the original annual sum.
    double clustering_objective = 0.0;  // sum of intra-cluster squared distances

    int periods() const { return steps_per_year / period_length; }

    /// Uniform single-step structure for runs without any profile shape.
    static TypicalPeriodSet uniform(int steps_per_year) {
        TypicalPeriodSet ts;
        ts.period_length = 1;
        ts.k = 1;
        ts.steps_per_year = steps_per_year;
        ts.weights = {steps_per_year};
        ts.assignment.assign(static_cast<size_t>(steps_per_year), 0);
        return ts;
    }

    /// Tabular debug dump; also the determinism witness used by tests.
    std::string to_csv() const {
        std::ostringstream os;
        os << "period_length," << period_length << "\nk," << k << "\nsteps_per_year,"
           << steps_per_year << "\n";
        os << "rep,weight\n";
        for (int r = 0; r < k; ++r) os << r << "," << weights[static_cast<size_t>(r)] << "\n";
        os << "period,rep\n";
        for (size_t p = 0; p < assignment.size(); ++p) os << p << "," << assignment[p] << "\n";
        for (const auto& [pid, reps] : representatives) {
            for (size_t r = 0; r < reps.size(); ++r) {
                os << pid << "," << r;
                for (double v : reps[r]) os << "," << strformat("%.17g", v);
                os << "\n";
            }
        }
        return os.str();
    }
};

namespace detail {

inline double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

/// Cluster all profiles jointly into k representative periods. Profiles are
/// min-max normalized per profile before clustering so the concatenated
/// period vectors are scale-free.
inline TypicalPeriodSet aggregate(const std::map<std::string, Profile>& profiles, int k,
                                  int period_length) {
    if (profiles.empty()) throw std::domain_error("aggregate: no profiles");
    const int steps = static_cast<int>(profiles.begin()->second.values.size());
    for (const auto& [id, p] : profiles)
        if (static_cast<int>(p.values.size()) != steps)
            throw std::domain_error("aggregate: profile " + id + " length mismatch");
    if (period_length < 1 || steps % period_length != 0)
        throw std::domain_error("aggregate: steps per year not divisible by period length");
    const int nper = steps / period_length;
    if (k < 1 || k > nper) throw std::domain_error("aggregate: k outside [1, periods]");

    // Concatenated normalized period vectors.
    std::vector<std::vector<double>> points(static_cast<size_t>(nper));
    for (auto& v : points) v.reserve(profiles.size() * static_cast<size_t>(period_length));
    for (const auto& [id, prof] : profiles) {
        double lo = prof.values[0], hi = prof.values[0];
        for (double v : prof.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double span = hi - lo;
        for (int p = 0; p < nper; ++p)
            for (int s = 0; s < period_length; ++s) {
                const double v = prof.values[static_cast<size_t>(p * period_length + s)];
                points[static_cast<size_t>(p)].push_back(span > 0.0 ? (v - lo) / span : 0.0);
            }
    }

    std::vector<std::vector<double>> dist(static_cast<size_t>(nper),
                                          std::vector<double>(static_cast<size_t>(nper), 0.0));
    for (int a = 0; a < nper; ++a)
        for (int b = a + 1; b < nper; ++b)
            dist[static_cast<size_t>(a)][static_cast<size_t>(b)] =
                dist[static_cast<size_t>(b)][static_cast<size_t>(a)] =
                    detail::sq_distance(points[static_cast<size_t>(a)], points[static_cast<size_t>(b)]);

    auto total_cost = [&](const std::vector<int>& medoids) {
        double cost = 0.0;
        for (int p = 0; p < nper; ++p) {
            double best = kInf;
            for (int m : medoids)
                best = std::min(best, dist[static_cast<size_t>(p)][static_cast<size_t>(m)]);
            cost += best;
        }
        return cost;
    };

    std::vector<int> medoids;
    double cost = kInf;
    for (int size = 1; size <= k; ++size) {
        // Greedy addition: candidate minimizing the total cost; ties resolve
        // to the lowest period index.
        int best_add = -1;
        double best_cost = kInf;
        for (int c = 0; c < nper; ++c) {
            if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
            std::vector<int> trial = medoids;
            trial.push_back(c);
            const double t = total_cost(trial);
            if (t < best_cost) {
                best_cost = t;
                best_add = c;
            }
        }
        medoids.push_back(best_add);
        cost = best_cost;
        // PAM swap phase: take the best strictly improving swap until none.
        bool improved = true;
        while (improved) {
            improved = false;
            int swap_out = -1, swap_in = -1;
            double swap_cost = cost;
            for (size_t mi = 0; mi < medoids.size(); ++mi) {
                for (int h = 0; h < nper; ++h) {
                    if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
                    std::vector<int> trial = medoids;
                    trial[mi] = h;
                    const double t = total_cost(trial);
                    if (t < swap_cost) {
                        swap_cost = t;
                        swap_out = static_cast<int>(mi);
                        swap_in = h;
                    }
                }
            }
            if (swap_out >= 0) {
                medoids[static_cast<size_t>(swap_out)] = swap_in;
                cost = swap_cost;
                improved = true;
            }
        }
    }
    std::sort(medoids.begin(), medoids.end());

    TypicalPeriodSet ts;
    ts.period_length = period_length;
    ts.k = k;
    ts.steps_per_year = steps;
    ts.assignment.assign(static_cast<size_t>(nper), 0);
    ts.weights.assign(static_cast<size_t>(k), 0);
    ts.clustering_objective = cost;
    for (int p = 0; p < nper; ++p) {
        int best = 0;
        for (int r = 1; r < k; ++r) {
            const double d = dist[static_cast<size_t>(p)][static_cast<size_t>(medoids[static_cast<size_t>(r)])];
            if (d < dist[static_cast<size_t>(p)][static_cast<size_t>(medoids[static_cast<size_t>(best)])])
                best = r;
        }
        ts.assignment[static_cast<size_t>(p)] = best;
        ++ts.weights[static_cast<size_t>(best)];
    }

    // Representatives are the medoid periods' original values, rescaled per
    // profile so the weighted annual sum matches the original exactly. Annual
    // sums are accumulated period by period on both sides so the k = periods
    // case reproduces the originals bit for bit.
    for (const auto& [id, prof] : profiles) {
        std::vector<std::vector<double>> reps(static_cast<size_t>(k));
        double weighted = 0.0, original = 0.0;
        for (int r = 0; r < k; ++r) {
            const int m = medoids[static_cast<size_t>(r)];
            auto& slice = reps[static_cast<size_t>(r)];
            slice.assign(prof.values.begin() + m * period_length,
                         prof.values.begin() + (m + 1) * period_length);
            double s = 0.0;
            for (double v : slice) s += v;
            weighted += ts.weights[static_cast<size_t>(r)] * s;
        }
        for (int p = 0; p < nper; ++p) {
            double s = 0.0;
            for (int i = 0; i < period_length; ++i)
                s += prof.values[static_cast<size_t>(p * period_length + i)];
            original += s;
        }
        const double factor = (weighted != 0.0) ? original / weighted : 1.0;
        for (auto& slice : reps)
            for (double& v : slice) v *= factor;
        ts.representatives[id] = std::move(reps);
    }
    return ts;
}

/// Expand per-representative results back to the full year: every original
/// period receives its representative's values.
inline std::vector<double> expand(const TypicalPeriodSet& ts,
                                  const std::vector<std::vector<double>>& per_period_results) {
    if (static_cast<int>(per_period_results.size()) != ts.k)
        throw std::out_of_range("expand: results must cover every representative");
    for (const auto& r : per_period_results)
        if (static_cast<int>(r.size()) != ts.period_length)
            throw std::out_of_range("expand: representative length mismatch");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(ts.steps_per_year));
    for (int rep : ts.assignment) {
        const auto& slice = per_period_results[static_cast<size_t>(rep)];
        out.insert(out.end(), slice.begin(), slice.end());
    }
    return out;
}

}  // namespace recopt
