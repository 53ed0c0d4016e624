#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "json.hpp"
#include "stacksp/errors.hpp"

namespace stacksp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Json = nlohmann::ordered_json;

// Parses "n" or "n/d" (decimal integers, optional leading '-').
inline Rat parse_rational(const std::string& text) {
    const auto bad = [&]() -> Rat {
        throw InputError("not a rational: '" + text + "'");
    };
    if (text.empty()) return bad();
    const auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text)) return bad();
        return Rat(Int(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return bad();
    Int d(den);
    if (d == 0) return bad();
    return Rat(Int(num), d);
}

inline std::string format_rational(const Rat& value) {
    std::string s = numerator(value).str();
    if (denominator(value) != 1) s += "/" + denominator(value).str();
    return s;
}

// Rationals serialize as a JSON integer when integral and within int64 range,
// otherwise as a "num/den" string.
inline Json rational_to_json(const Rat& value) {
    if (denominator(value) == 1) {
        const Int& n = numerator(value);
        if (n >= std::numeric_limits<std::int64_t>::min() &&
            n <= std::numeric_limits<std::int64_t>::max()) {
            return Json(n.convert_to<std::int64_t>());
        }
    }
    return Json(format_rational(value));
}

inline Rat rational_from_json(const Json& j) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Rat(Int(j.get<std::uint64_t>()));
        return Rat(Int(j.get<std::int64_t>()));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InputError("expected integer or \"num/den\" string, got: " + j.dump());
}

// A nonnegative rational extended with a distinguished infinite value. Used
// for prices and for extended path costs; infinity is symbolic, never a
// numeric sentinel.
class Price {
public:
    Price() : infinite_(true) {}

    static Price infinite() { return Price(); }

    static Price finite(Rat value) {
        if (value < 0) throw InputError("negative price: " + format_rational(value));
        Price p;
        p.infinite_ = false;
        p.value_ = std::move(value);
        return p;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    const Rat& value() const {
        if (infinite_) throw Error("value() on infinite price");
        return value_;
    }

    friend bool operator==(const Price& a, const Price& b) {
        if (a.infinite_ != b.infinite_) return false;
        return a.infinite_ || a.value_ == b.value_;
    }
    friend bool operator!=(const Price& a, const Price& b) { return !(a == b); }

private:
    bool infinite_;
    Rat value_;
};

inline std::string format_price(const Price& p) {
    return p.is_infinite() ? "inf" : format_rational(p.value());
}

inline Json price_to_json(const Price& p) {
    return p.is_infinite() ? Json("inf") : rational_to_json(p.value());
}

inline Price price_from_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return Price::infinite();
    return Price::finite(rational_from_json(j));
}

}  // namespace stacksp
