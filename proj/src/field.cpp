#include "secrep/field.hpp"

#include <ostream>
#include <string>

namespace secrep {

bool is_prime(std::uint32_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; std::uint64_t(d) * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t order) : q_(order) {
    if (!is_prime(order))
        throw std::invalid_argument("field order " + std::to_string(order) + " is not prime");
}

Fp Fp::from_int(std::int64_t value, PrimeField field) {
    const std::int64_t q = field.order();
    std::int64_t r = value % q;
    if (r < 0) r += q;
    return Fp(static_cast<std::uint64_t>(r), field);
}

Fp inverse(Fp a) {
    if (a.is_zero()) throw std::domain_error("zero is not invertible");
    // extended Euclid on (v, q); q prime guarantees gcd 1
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = a.field().order(), new_r = a.value();
    while (new_r != 0) {
        const std::int64_t quot = r / new_r;
        t -= quot * new_t;
        std::swap(t, new_t);
        r -= quot * new_r;
        std::swap(r, new_r);
    }
    return Fp::from_int(t, a.field());
}

Fp operator/(Fp a, Fp b) {
    a.require_same_field(b);
    return a * inverse(b);
}

Fp pow(Fp a, std::uint64_t e) {
    Fp result(1, a.field());
    Fp base = a;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.value(); }

}  // namespace secrep
