#include "gradecast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gradecast/random.hpp"

namespace gradecast {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return rng_.uniform(); }
    bool chance(double p) { return rng_.uniform() < p; }
    int integer(int lo, int hi) { return lo + static_cast<int>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1))); }
    double normal() {
        const double u1 = 1.0 - rng_.uniform();  // (0, 1]
        const double u2 = rng_.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    template <class T>
    T pick(const std::vector<T>& values, const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = rng_.uniform() * total;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (u < weights[i]) return values[i];
            u -= weights[i];
        }
        return values.back();
    }
    template <class T>
    T pick(const std::vector<T>& values) {
        return values[static_cast<std::size_t>(rng_.below(values.size()))];
    }

private:
    SplitMix64 rng_;
};

std::string fmt(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

constexpr std::size_t kGradeColumn = 31;  // "Curricular units 2nd sem (grade)"

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

struct Semester {
    int credited, enrolled, evaluations, approved, without;
    double grade;
};

Semester semester(Draw& d, double ability, bool engaged, int credited) {
    Semester s{};
    s.credited = credited;
    s.enrolled = engaged || d.chance(0.5) ? d.pick<int>({5, 6, 6, 6, 7, 8}) + credited / 2 : 0;
    if (s.enrolled == 0) return s;
    s.evaluations = engaged ? s.enrolled + std::max(0, static_cast<int>(std::lround(2.0 + 1.5 * d.normal())))
                            : d.integer(0, s.enrolled);
    const double rate = engaged ? clamp(0.72 + 0.22 * ability + 0.12 * d.normal(), 0.0, 1.0) : 0.15 * d.uniform();
    s.approved = std::min(s.enrolled, static_cast<int>(std::lround(rate * s.enrolled)));
    s.without = engaged ? (d.chance(0.1) ? d.integer(1, 2) : 0) : s.enrolled - s.evaluations;
    if (s.approved > 0) s.grade = clamp(12.3 + 1.4 * ability + 0.7 * d.normal(), 10.0, 18.9);
    return s;
}

}  // namespace

const std::vector<std::string>& reference_header() {
    static const std::vector<std::string> header = [] {
        std::vector<std::string> h{"Marital status",
                                   "Application mode",
                                   "Application order",
                                   "Course",
                                   "Daytime/evening attendance\t",
                                   "Previous qualification",
                                   "Previous qualification (grade)",
                                   "Nacionality",
                                   "Mother's qualification",
                                   "Father's qualification",
                                   "Mother's occupation",
                                   "Father's occupation",
                                   "Admission grade",
                                   "Displaced",
                                   "Educational special needs",
                                   "Debtor",
                                   "Tuition fees up to date",
                                   "Gender",
                                   "Scholarship holder",
                                   "Age at enrollment",
                                   "International"};
        for (const char* sem : {"1st", "2nd"})
            for (const char* what : {"credited", "enrolled", "evaluations", "approved", "grade", "without evaluations"})
                h.push_back(std::string("Curricular units ") + sem + " sem (" + what + ")");
        for (const char* tail : {"Unemployment rate", "Inflation rate", "GDP", "Target"}) h.push_back(tail);
        return h;
    }();
    return header;
}

std::string synthetic_reference_csv(const SyntheticOptions& options) {
    Draw d(options.seed);
    std::ostringstream os;
    const auto& header = reference_header();
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? ";" : "") << header[i];
    os << '\n';

    const std::vector<int> courses{33, 171, 8014, 9003, 9070, 9085, 9119, 9130, 9147,
                                   9238, 9254, 9500, 9556, 9670, 9773, 9853, 9991};
    const std::vector<int> modes{1, 2, 5, 7, 10, 15, 16, 17, 18, 26, 27, 39, 42, 43, 44, 51, 53, 57};
    const std::vector<int> quals{1, 2, 3, 4, 5, 6, 9, 10, 11, 12, 14, 19, 22, 26, 27, 29, 30, 34, 37, 38, 39, 40};
    const std::vector<int> occupations{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 90, 99, 122, 123, 125, 131, 132, 134, 141,
                                       143, 144, 151, 152, 153, 171, 173, 175, 191, 192, 193, 194};
    const std::vector<int> nationalities{1, 2, 6, 11, 13, 14, 17, 21, 22, 24, 25, 26, 41, 62, 100, 101, 103, 105, 109};
    const std::vector<double> unemployment{7.6, 8.9, 9.4, 10.8, 11.1, 12.4, 12.7, 13.9, 15.5, 16.2};
    const std::vector<double> inflation{-0.8, -0.3, 0.3, 0.5, 0.6, 1.4, 2.6, 2.8, 3.7};
    const std::vector<double> gdp{-4.06, -3.12, -1.7, -0.92, 0.32, 0.79, 1.74, 1.79, 2.02, 3.51};

    std::vector<std::size_t> invalid = shuffled_indices(options.rows, options.seed ^ 0x5eedULL);
    invalid.resize(std::min(options.invalid_rows, options.rows));
    std::sort(invalid.begin(), invalid.end());

    for (std::size_t r = 0; r < options.rows; ++r) {
        const double ability = d.normal();
        const int gender = d.chance(0.35) ? 1 : 0;
        const int scholarship = d.chance(0.2 + 0.1 * (ability > 0)) ? 1 : 0;
        const int debtor = d.chance(ability < -0.5 ? 0.2 : 0.07) ? 1 : 0;
        const int fees = d.chance(debtor ? 0.6 : 0.93) ? 1 : 0;
        const int daytime = d.chance(0.89) ? 1 : 0;
        int age = daytime ? 17 + static_cast<int>(std::abs(d.normal()) * 4.0) : 20 + static_cast<int>(std::abs(d.normal()) * 10.0);
        age = std::min(age, 70);
        if (std::binary_search(invalid.begin(), invalid.end(), r)) age = 5;

        const double engage_score = 1.3 + 1.2 * ability + (fees ? 0.6 : -2.2) + (scholarship ? 0.5 : 0.0) -
                                    0.02 * (age - 20) + 0.4 * d.normal();
        const bool engaged1 = engage_score > 0.0;
        const bool engaged2 = engaged1 && engage_score + 0.5 * d.normal() > 0.3;
        const int credited = d.chance(0.12) ? d.integer(1, 12) : 0;
        const auto s1 = semester(d, ability, engaged1, credited);
        auto s2 = semester(d, ability, engaged2, credited);
        if (s2.approved > 0 && s1.approved > 0) s2.grade = clamp(0.75 * s1.grade + 0.25 * s2.grade + 0.4 * d.normal(), 10.0, 18.9);

        const double admission = clamp(127.0 + 10.0 * ability + 9.0 * d.normal(), 95.0, 190.0);
        const double previous = clamp(0.6 * admission + 52.0 + 8.0 * d.normal(), 95.0, 190.0);
        const int nationality = d.chance(0.97) ? 1 : d.pick(nationalities);
        const std::string target = !engaged2 ? "Dropout" : (s2.approved * 10 >= s2.enrolled * 8 ? "Graduate" : "Enrolled");

        std::vector<std::string> cells{
            std::to_string(d.pick<int>({1, 2, 3, 4, 5, 6}, {88, 8, 0.5, 2, 1, 0.5})),
            std::to_string(d.pick(modes)),
            std::to_string(d.pick<int>({0, 1, 2, 3, 4, 5, 6, 9}, {0.1, 70, 12, 7, 5, 3, 2, 0.1})),
            std::to_string(d.pick(courses)),
            std::to_string(daytime),
            std::to_string(d.chance(0.84) ? 1 : d.pick(quals)),
            fmt(previous, 1),
            std::to_string(nationality),
            std::to_string(d.pick(quals)),
            std::to_string(d.pick(quals)),
            std::to_string(d.pick(occupations)),
            std::to_string(d.pick(occupations)),
            fmt(admission, 1),
            std::to_string(age <= 20 && d.chance(0.6) ? 1 : 0),
            std::to_string(d.chance(0.012) ? 1 : 0),
            std::to_string(debtor),
            std::to_string(fees),
            std::to_string(gender),
            std::to_string(scholarship),
            std::to_string(age),
            std::to_string(nationality == 1 ? 0 : 1),
        };
        for (const Semester* s : {&s1, static_cast<const Semester*>(&s2)}) {
            cells.push_back(std::to_string(s->credited));
            cells.push_back(std::to_string(s->enrolled));
            cells.push_back(std::to_string(s->evaluations));
            cells.push_back(std::to_string(s->approved));
            cells.push_back(s->grade == 0.0 ? "0" : fmt(s->grade, 6));
            cells.push_back(std::to_string(s->without));
        }
        cells.push_back(fmt(d.pick(unemployment), 1));
        cells.push_back(fmt(d.pick(inflation), 1));
        cells.push_back(fmt(d.pick(gdp), 2));
        cells.push_back(target);

        // The grade target and the dropout label stay present.
        if (options.missing_fraction > 0.0)
            for (std::size_t c = 0; c + 1 < cells.size(); ++c)
                if (c != kGradeColumn && d.chance(options.missing_fraction)) cells[c].clear();

        for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? ";" : "") << cells[c];
        os << '\n';
    }
    return os.str();
}

}  // namespace gradecast
