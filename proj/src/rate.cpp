#include "torrec/rate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torrec/errors.hpp"

namespace torrec {

namespace {

Rat rat_pow(const Rat& q, unsigned long n) {
    Rat acc(1);
    Rat base = q;
    while (n > 0) {
        if (n & 1UL) acc *= base;
        n >>= 1UL;
        if (n > 0) base *= base;
    }
    return acc;
}

Rat parse_rat_token(const std::string& t) {
    // "2", "3/2", "0.25"
    auto dot = t.find('.');
    if (dot == std::string::npos) return Rat(t);
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits.erase(digits.begin());
    }
    if (digits.empty()) throw UsageError("bad rational token: " + t);
    Rat r(Int(digits), rat_pow(Rat(10), t.size() - dot - 1).get_num());
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

}  // namespace

Alpha Alpha::from_double(double v) {
    if (v < 0) throw UsageError("alpha must be nonnegative");
    Alpha a;
    a.value = v;
    if (v == 0.0) a.exact_base = Rat(1);
    return a;
}

Alpha Alpha::log_of(const Rat& base) {
    if (!(base >= 1)) throw UsageError("alpha = log(base) needs base >= 1");
    Alpha a;
    a.exact_base = base;
    a.value = std::log(base.get_d());
    return a;
}

Alpha Alpha::infinity() {
    Alpha a;
    a.infinite = true;
    a.value = std::numeric_limits<double>::infinity();
    return a;
}

Alpha Alpha::parse(const std::string& text) {
    if (text == "inf" || text == "infinity") return infinity();
    if (text.rfind("ln", 0) == 0) {
        std::string body = text.substr(2);
        if (!body.empty() && body.front() == '(' && body.back() == ')')
            body = body.substr(1, body.size() - 2);
        return log_of(parse_rat_token(body));
    }
    return from_double(std::stod(text));
}

std::string Alpha::to_string() const {
    if (infinite) return "inf";
    if (exact_base) return "ln(" + exact_base->get_num().get_str() + "/" + exact_base->get_den().get_str() + ")";
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

RateFunction RateFunction::exponential(const Alpha& a) {
    if (a.infinite) throw UsageError("exponential rate needs finite alpha");
    RateFunction r;
    r.alpha_ = a;
    return r;
}

RateFunction RateFunction::table(std::vector<std::pair<unsigned long, Scalar>> rows) {
    if (rows.empty()) throw UsageError("empty rate table");
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].second.value > 0)) throw UsageError("rate table values must be positive");
        if (i > 0 && !(rows[i].second.value < rows[i - 1].second.value))
            throw UsageError("rate table must be strictly decreasing");
    }
    RateFunction r;
    r.table_ = std::move(rows);
    r.horizon_ = r.table_.back().first;
    // finite-horizon proxy of liminf -log psi(n) / n over the tail
    double a = std::numeric_limits<double>::infinity();
    for (const auto& [n, s] : r.table_)
        if (n * 2 >= r.horizon_) a = std::min(a, -std::log(s.value) / static_cast<double>(n));
    r.alpha_ = Alpha::from_double(std::max(0.0, a));
    return r;
}

RateFunction RateFunction::table_from_csv(const std::string& csv_body) {
    std::vector<std::pair<unsigned long, Scalar>> rows;
    std::istringstream is(csv_body);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("rate table rows are 'n,psi'");
        unsigned long n = std::stoul(line.substr(0, comma));
        std::string val = line.substr(comma + 1);
        val.erase(std::remove_if(val.begin(), val.end(), [](char c) { return c == ' ' || c == '\r'; }),
                  val.end());
        rows.emplace_back(n, Scalar(parse_rat_token(val)));
    }
    return table(std::move(rows));
}

Scalar RateFunction::psi(unsigned long n) const {
    if (n == 0) throw UsageError("psi is defined for n >= 1");
    if (is_exponential()) {
        if (alpha_.exact_base) {
            Rat inv = Rat(alpha_.exact_base->get_den(), alpha_.exact_base->get_num());
            inv.canonicalize();
            return Scalar(rat_pow(inv, n));
        }
        return Scalar(std::exp(-alpha_.value * static_cast<double>(n)));
    }
    for (const auto& [m, s] : table_)
        if (m == n) return s;
    throw UsageError("rate table does not cover n = " + std::to_string(n));
}

bool RateFunction::covers(unsigned long n) const {
    if (is_exponential()) return n >= 1;
    for (const auto& [m, s] : table_)
        if (m == n) return true;
    return false;
}

unsigned long RateFunction::max_n() const {
    return is_exponential() ? ~0UL : horizon_;
}

}  // namespace torrec
