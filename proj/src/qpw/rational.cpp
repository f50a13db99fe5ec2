#include "qpw/rational.hpp"

#include "qpw/error.hpp"

#include <limits>

namespace qpw {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&]() { fail(ErrorCode::InvalidArgument, "malformed rational '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) bad();
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') bad();
    };
    if (slash == std::string::npos) {
        check_int(s);
        if (s[0] == '+') s.erase(0, 1);
        return Rational(mpz_class(s, 10));
    }
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    check_int(num);
    check_int(den);
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) fail(ErrorCode::InvalidArgument, "zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::int64_t to_int64(const Rational& q) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        fail(ErrorCode::OutOfRange, "value " + to_string(q) + " is not a machine integer");
    return q.get_num().get_si();
}

} // namespace qpw
