// svi.hpp
// Reconstruction of multi-year daily search-volume series from per-month
// 0-100-rescaled fragments and the monthly series, plus dataset diagnostics.

#pragma once

#include <string>
#include <vector>

#include "statarb/dates.hpp"
#include "statarb/errors.hpp"

namespace statarb {

// One month of daily values as delivered by the source: integers 0..100,
// self-rescaled so the month's maximum is 100 (or all zero).
struct SviFragment {
    std::string ticker;
    YearMonth month_key;
    std::vector<std::pair<Date, int>> values;  // strictly increasing dates within month_key
};

struct MonthlySvi {
    std::string ticker;
    std::vector<std::pair<YearMonth, double>> levels;  // contiguous months, level in [0, 100]

    // Level for `m`, or -1 when the month is not covered.
    double level_for(YearMonth m) const;
};

struct StitchedSvi {
    std::string ticker;
    std::vector<std::pair<Date, double>> series;  // ordered by date

    // Adjusted value on `day`; days without data count as 0.
    double value_on(Date day) const;
};

// "<1" becomes 0; integers 0..100 pass through.
int normalize_raw(const std::string& raw);

void validate_fragment(const SviFragment& fragment);

// Scales each fragment by its monthly level / 100 and concatenates by date.
StitchedSvi stitch(const std::vector<SviFragment>& fragments, const MonthlySvi& monthly);

// Share of universe members whose adjusted SVI is 0 on `day` (missing = 0).
double zero_share(Date day, const std::vector<std::string>& universe,
                  const std::vector<StitchedSvi>& stitched);

// Trailing arithmetic mean; positions with fewer than `window` observations
// are omitted.
std::vector<std::pair<Date, double>> rolling_mean(
    const std::vector<std::pair<Date, double>>& series, int window);

std::vector<SviFragment> load_svi_daily(const std::string& path);
std::vector<MonthlySvi> load_svi_monthly(const std::string& path);

void write_stitched(const std::string& path, const std::vector<StitchedSvi>& stitched);
std::vector<StitchedSvi> load_stitched(const std::string& path);

const StitchedSvi* find_stitched(const std::vector<StitchedSvi>& stitched,
                                 const std::string& ticker);

}  // namespace statarb
