#include "statarb/svi.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "statarb/csv.hpp"

namespace statarb {

double MonthlySvi::level_for(YearMonth m) const {
    auto it = std::lower_bound(levels.begin(), levels.end(), m,
                               [](const auto& p, YearMonth key) { return p.first < key; });
    if (it == levels.end() || it->first != m) return -1.0;
    return it->second;
}

double StitchedSvi::value_on(Date day) const {
    auto it = std::lower_bound(series.begin(), series.end(), day,
                               [](const auto& p, Date key) { return p.first < key; });
    if (it == series.end() || it->first != day) return 0.0;
    return it->second;
}

int normalize_raw(const std::string& raw) {
    if (raw == "<1") return 0;
    int v = 0;
    if (raw.empty()) raise(ErrorCode::OutOfRangeValue, "empty SVI value");
    for (char c : raw) {
        if (c < '0' || c > '9')
            raise(ErrorCode::OutOfRangeValue, "SVI value must be 0..100 or \"<1\", got \"" + raw + "\"");
        v = v * 10 + (c - '0');
        if (v > 100) raise(ErrorCode::OutOfRangeValue, "SVI value above 100: \"" + raw + "\"");
    }
    return v;
}

void validate_fragment(const SviFragment& fragment) {
    int max_value = 0;
    Date prev;
    bool first = true;
    for (const auto& [date, value] : fragment.values) {
        if (value < 0 || value > 100)
            raise(ErrorCode::OutOfRangeValue, fragment.ticker + ": fragment value out of range");
        if (YearMonth(date) != fragment.month_key)
            raise(ErrorCode::MalformedRow, fragment.ticker + ": fragment date " + date.to_string() +
                                               " outside month " + fragment.month_key.to_string());
        if (!first && date <= prev)
            raise(ErrorCode::MalformedRow,
                  fragment.ticker + ": fragment dates not strictly increasing");
        prev = date;
        first = false;
        max_value = std::max(max_value, value);
    }
    if (!fragment.values.empty() && max_value != 100 && max_value != 0)
        raise(ErrorCode::MalformedRow, fragment.ticker + " " + fragment.month_key.to_string() +
                                           ": fragment is neither all-zero nor rescaled to max 100");
}

StitchedSvi stitch(const std::vector<SviFragment>& fragments, const MonthlySvi& monthly) {
    StitchedSvi out;
    std::vector<const SviFragment*> ordered;
    ordered.reserve(fragments.size());
    for (const auto& f : fragments) ordered.push_back(&f);
    std::sort(ordered.begin(), ordered.end(),
              [](const SviFragment* a, const SviFragment* b) { return a->month_key < b->month_key; });
    for (size_t i = 0; i < ordered.size(); ++i) {
        if (!out.ticker.empty() && ordered[i]->ticker != out.ticker)
            raise(ErrorCode::TickerMismatch, "fragments mix tickers " + out.ticker + " and " +
                                                 ordered[i]->ticker);
        out.ticker = ordered[i]->ticker;
        if (i > 0 && ordered[i]->month_key == ordered[i - 1]->month_key)
            raise(ErrorCode::DuplicateMonth,
                  out.ticker + ": duplicate fragment month " + ordered[i]->month_key.to_string());
        double level = monthly.level_for(ordered[i]->month_key);
        if (level < 0.0)
            raise(ErrorCode::MissingMonthlyLevel,
                  out.ticker + ": no monthly level for " + ordered[i]->month_key.to_string());
        for (const auto& [date, value] : ordered[i]->values)
            out.series.emplace_back(date, value * (level / 100.0));
    }
    return out;
}

double zero_share(Date day, const std::vector<std::string>& universe,
                  const std::vector<StitchedSvi>& stitched) {
    if (universe.empty()) raise(ErrorCode::EmptyUniverse, "zero_share over empty universe");
    size_t zeros = 0;
    for (const auto& ticker : universe) {
        const StitchedSvi* s = find_stitched(stitched, ticker);
        double v = s ? s->value_on(day) : 0.0;
        if (v == 0.0) ++zeros;
    }
    return static_cast<double>(zeros) / static_cast<double>(universe.size());
}

std::vector<std::pair<Date, double>> rolling_mean(
    const std::vector<std::pair<Date, double>>& series, int window) {
    if (window < 1) raise(ErrorCode::InvalidConfig, "rolling window must be positive");
    std::vector<std::pair<Date, double>> out;
    if (series.size() < static_cast<size_t>(window)) return out;
    std::vector<double> prefix(series.size() + 1, 0.0);
    for (size_t i = 0; i < series.size(); ++i) prefix[i + 1] = prefix[i] + series[i].second;
    for (size_t k = window - 1; k < series.size(); ++k)
        out.emplace_back(series[k].first, (prefix[k + 1] - prefix[k + 1 - window]) / window);
    return out;
}

std::vector<SviFragment> load_svi_daily(const std::string& path) {
    CsvReader in(path, {"ticker", "date", "value"});
    std::map<std::pair<std::string, YearMonth>, SviFragment> groups;
    while (in.next()) {
        Date d;
        if (!Date::try_parse(in.field(1), d)) in.fail("invalid date \"" + in.field(1) + "\"");
        int value;
        try {
            value = normalize_raw(in.field(2));
        } catch (const Error& e) {
            in.fail(e.what());
        }
        YearMonth ym(d);
        SviFragment& frag = groups[{in.field(0), ym}];
        frag.ticker = in.field(0);
        frag.month_key = ym;
        frag.values.emplace_back(d, value);
    }
    std::vector<SviFragment> fragments;
    fragments.reserve(groups.size());
    for (auto& [key, frag] : groups) {
        std::sort(frag.values.begin(), frag.values.end());
        for (size_t i = 1; i < frag.values.size(); ++i)
            if (frag.values[i].first == frag.values[i - 1].first)
                raise(ErrorCode::MalformedRow, path + ": duplicate SVI for " + frag.ticker + " on " +
                                                   frag.values[i].first.to_string());
        validate_fragment(frag);
        fragments.push_back(std::move(frag));
    }
    return fragments;
}

std::vector<MonthlySvi> load_svi_monthly(const std::string& path) {
    CsvReader in(path, {"ticker", "month", "level"});
    std::map<std::string, MonthlySvi> groups;
    while (in.next()) {
        YearMonth ym;
        if (!YearMonth::try_parse(in.field(1), ym)) in.fail("invalid month \"" + in.field(1) + "\"");
        double level = in.parse_double(2);
        if (level < 0.0 || level > 100.0) in.fail("monthly level outside [0, 100]");
        MonthlySvi& m = groups[in.field(0)];
        m.ticker = in.field(0);
        m.levels.emplace_back(ym, level);
    }
    std::vector<MonthlySvi> monthly;
    monthly.reserve(groups.size());
    for (auto& [ticker, m] : groups) {
        std::sort(m.levels.begin(), m.levels.end());
        for (size_t i = 1; i < m.levels.size(); ++i) {
            if (m.levels[i].first == m.levels[i - 1].first)
                raise(ErrorCode::DuplicateMonth,
                      path + ": duplicate monthly level for " + ticker + " " +
                          m.levels[i].first.to_string());
            if (m.levels[i].first != m.levels[i - 1].first.next())
                raise(ErrorCode::MalformedRow, path + ": monthly series for " + ticker +
                                                   " not contiguous at " +
                                                   m.levels[i].first.to_string());
        }
        monthly.push_back(std::move(m));
    }
    return monthly;
}

void write_stitched(const std::string& path, const std::vector<StitchedSvi>& stitched) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out << "ticker,date,svi\n";
    for (const auto& s : stitched)
        for (const auto& [date, value] : s.series)
            out << s.ticker << ',' << date.to_string() << ',' << format_fixed(value, 6) << '\n';
}

std::vector<StitchedSvi> load_stitched(const std::string& path) {
    CsvReader in(path, {"ticker", "date", "svi"});
    std::map<std::string, StitchedSvi> groups;
    while (in.next()) {
        Date d;
        if (!Date::try_parse(in.field(1), d)) in.fail("invalid date \"" + in.field(1) + "\"");
        double v = in.parse_double(2);
        if (v < 0.0 || v > 100.0) in.fail("stitched SVI outside [0, 100]");
        StitchedSvi& s = groups[in.field(0)];
        s.ticker = in.field(0);
        s.series.emplace_back(d, v);
    }
    std::vector<StitchedSvi> stitched;
    stitched.reserve(groups.size());
    for (auto& [ticker, s] : groups) {
        std::sort(s.series.begin(), s.series.end());
        stitched.push_back(std::move(s));
    }
    return stitched;
}

const StitchedSvi* find_stitched(const std::vector<StitchedSvi>& stitched,
                                 const std::string& ticker) {
    auto it = std::lower_bound(stitched.begin(), stitched.end(), ticker,
                               [](const StitchedSvi& s, const std::string& t) { return s.ticker < t; });
    if (it == stitched.end() || it->ticker != ticker) return nullptr;
    return &*it;
}

}  // namespace statarb
