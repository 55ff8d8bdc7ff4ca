#pragma once

// Secondary-raw-material forecasting over anthropogenic stocks.
//
// Goods enter a stock when produced and flow back as scrap after a normally
// distributed residence time. The annual outflow in year x of an inflow D
// made in year t is D times the Gaussian density evaluated at x-t; summing
// over all earlier inflows and all stocks of a material gives the theoretical
// availability, discounted by obsolete/recovery/collection factors to the
// effective one. Materials whose sources are better described by a simple
// growth trend (waste streams with sub-annual residence) use an exogenous
// series instead.

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "recopt/core.hpp"

namespace recopt {

struct StockProfile {
    std::string stock_id;
    double mu = 0.0;               // mean residence time, years
    double sigma = 0.0;            // standard deviation, years
    double sector_share = 0.0;     // fraction of the material's inflow entering this stock
    double recovery_rate = 1.0;    // fraction recoverable from the outflow
    double obsolete_share = 0.0;   // fraction permanently lost in the stock
    double collection_rate = 1.0;  // fraction of recovered scrap actually collected
};

struct MaterialStocks {
    std::string material;
    std::vector<StockProfile> stocks;

    void validate() const {
        double share_sum = 0.0;
        for (const auto& s : stocks) {
            if (s.sigma <= 0.0)
                throw std::domain_error("stock " + material + "/" + s.stock_id + ": sigma must be > 0");
            for (double f : {s.sector_share, s.recovery_rate, s.obsolete_share, s.collection_rate})
                if (f < 0.0 || f > 1.0)
                    throw std::domain_error("stock " + material + "/" + s.stock_id +
                                            ": fraction outside [0,1]");
            share_sum += s.sector_share;
        }
        if (!stocks.empty() && std::fabs(share_sum - 1.0) > 1e-9)
            throw std::domain_error("stocks of " + material + ": sector shares must sum to 1");
    }
};

/// Availability trend for materials without residence-time stocks: a base
/// quantity grown at a constant annual rate, discounted by a recovery rate.
struct ExogenousSeries {
    std::string material;
    int base_year = 0;
    double base_quantity = 0.0;  // tonnes generated in the base year
    double growth_rate = 0.0;    // fraction per year
    double recovery_rate = 1.0;

    double theoretical(int year) const {
        return base_quantity * std::pow(1.0 + growth_rate, year - base_year);
    }
    double effective(int year) const { return theoretical(year) * recovery_rate; }
};

/// Gaussian density of the residence-time distribution at age dt.
inline double retention_fraction(double mu, double sigma, double dt) {
    if (sigma <= 0.0) throw std::domain_error("retention_fraction: sigma must be > 0");
    if (dt < 0.0) throw std::domain_error("retention_fraction: negative age");
    const double z = (dt - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// Scrap arising in the year that lies x_minus_t years after an inflow D.
inline double scrap_outflow(double inflow, const StockProfile& profile, double x_minus_t) {
    if (inflow < 0.0) throw std::domain_error("scrap_outflow: negative inflow");
    return inflow * retention_fraction(profile.mu, profile.sigma, x_minus_t);
}

/// Time-indexed inflow record per (material, stock, year). Entries before
/// first_path_year are exogenous history; entries at or after it are written
/// by the transformation path as it commits production.
class InflowLedger {
  public:
    explicit InflowLedger(int first_path_year = 0) : first_path_year_(first_path_year) {}

    int first_path_year() const { return first_path_year_; }

    void add_historical(const std::string& material, const std::string& stock, int year,
                        double quantity) {
        if (quantity < 0.0) throw std::domain_error("ledger: negative inflow");
        if (year >= first_path_year_)
            throw std::logic_error("ledger: historical entry in path years");
        entries_[material][stock][year] += quantity;
    }

    void add_path_entry(const std::string& material, const std::string& stock, int year,
                        double quantity) {
        if (quantity < 0.0) throw std::domain_error("ledger: negative inflow");
        if (year < first_path_year_)
            throw std::logic_error("ledger: path entry before the path horizon");
        auto& cell = entries_[material][stock][year];
        if (cell != 0.0) throw std::logic_error("ledger: path entry written twice for " +
                                                material + "/" + stock + "/" + std::to_string(year));
        cell = quantity;
    }

    bool has_material(const std::string& material) const { return entries_.count(material) > 0; }

    const std::map<int, double>& inflows(const std::string& material,
                                         const std::string& stock) const {
        static const std::map<int, double> kEmpty;
        auto mit = entries_.find(material);
        if (mit == entries_.end()) return kEmpty;
        auto sit = mit->second.find(stock);
        if (sit == mit->second.end()) return kEmpty;
        return sit->second;
    }

    /// Pointwise sum of two ledgers (availability is linear in the inflows).
    static InflowLedger sum(const InflowLedger& a, const InflowLedger& b) {
        InflowLedger out(std::min(a.first_path_year_, b.first_path_year_));
        for (const auto* src : {&a, &b})
            for (const auto& [mat, stocks] : src->entries_)
                for (const auto& [stock, years] : stocks)
                    for (const auto& [year, qty] : years) out.entries_[mat][stock][year] += qty;
        return out;
    }

  private:
    std::map<std::string, std::map<std::string, std::map<int, double>>> entries_;
    int first_path_year_;
};

struct ScrapAvailability {
    double theoretical = 0.0;  // sum over stocks of the raw outflow
    double effective = 0.0;    // after obsolete, recovery and collection factors
};

/// Availability of a material in year x: Gaussian outflow summed over all
/// ledger inflows strictly before x and over the material's stocks.
inline ScrapAvailability available_secondary(const InflowLedger& ledger,
                                             const MaterialStocks& stocks, int x) {
    if (!ledger.has_material(stocks.material))
        throw std::out_of_range("ledger has no inflows for material: " + stocks.material);
    ScrapAvailability out;
    for (const auto& s : stocks.stocks) {
        double theo = 0.0;
        for (const auto& [year, inflow] : ledger.inflows(stocks.material, s.stock_id)) {
            if (year >= x) break;
            theo += scrap_outflow(inflow, s, static_cast<double>(x - year));
        }
        out.theoretical += theo;
        out.effective += theo * (1.0 - s.obsolete_share) * s.recovery_rate * s.collection_rate;
    }
    return out;
}

/// Seed the ledger with pre-path production split across the material's
/// stocks by sector share.
inline InflowLedger backfill_prepath(const std::string& material,
                                     const std::map<int, double>& historical_production,
                                     const std::vector<StockProfile>& stocks,
                                     int first_path_year) {
    InflowLedger ledger(first_path_year);
    for (const auto& [year, production] : historical_production) {
        if (production < 0.0) throw std::domain_error("backfill_prepath: negative production");
        for (const auto& s : stocks)
            ledger.add_historical(material, s.stock_id, year, production * s.sector_share);
    }
    return ledger;
}

/// Per-material availability rules: residence-time stocks or an exogenous
/// trend, exactly one of the two.
struct MfaModel {
    std::map<std::string, MaterialStocks> stocked;
    std::map<std::string, ExogenousSeries> exogenous;

    bool covers(const std::string& material) const {
        return stocked.count(material) > 0 || exogenous.count(material) > 0;
    }

    ScrapAvailability availability(const InflowLedger& ledger, const std::string& material,
                                   int year) const {
        if (auto it = stocked.find(material); it != stocked.end())
            return available_secondary(ledger, it->second, year);
        if (auto it = exogenous.find(material); it != exogenous.end())
            return ScrapAvailability{it->second.theoretical(year), it->second.effective(year)};
        throw std::out_of_range("no availability rule for material: " + material);
    }
};

}  // namespace recopt
