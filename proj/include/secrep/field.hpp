#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>

namespace secrep {

/// Thrown when elements of different prime fields meet in one expression.
struct FieldMismatch : std::logic_error {
    FieldMismatch()
        : std::logic_error("field mismatch: operands belong to different prime fields") {}
};

bool is_prime(std::uint32_t n) noexcept;

/// Descriptor of a prime field F_q. Primality is checked once, here;
/// everything downstream trusts the order.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t order);

    std::uint32_t order() const noexcept { return q_; }

    friend bool operator==(PrimeField a, PrimeField b) noexcept { return a.q_ == b.q_; }
    friend bool operator!=(PrimeField a, PrimeField b) noexcept { return a.q_ != b.q_; }

private:
    std::uint32_t q_;
};

/// Element of F_q in canonical form: value in [0, q). Each element carries
/// its field, so cross-field arithmetic throws instead of coercing.
class Fp {
public:
    Fp(std::uint64_t value, PrimeField field)
        : f_(field), v_(static_cast<std::uint32_t>(value % field.order())) {}

    /// Reduces signed integers into [0, q).
    static Fp from_int(std::int64_t value, PrimeField field);

    std::uint32_t value() const noexcept { return v_; }
    PrimeField field() const noexcept { return f_; }
    bool is_zero() const noexcept { return v_ == 0; }

    friend Fp operator+(Fp a, Fp b) {
        a.require_same_field(b);
        return a.raw((std::uint64_t(a.v_) + b.v_) % a.order());
    }
    friend Fp operator-(Fp a, Fp b) {
        a.require_same_field(b);
        return a.raw((std::uint64_t(a.v_) + a.order() - b.v_) % a.order());
    }
    friend Fp operator*(Fp a, Fp b) {
        a.require_same_field(b);
        return a.raw(std::uint64_t(a.v_) * b.v_ % a.order());
    }
    friend Fp operator/(Fp a, Fp b);
    Fp operator-() const { return raw((std::uint64_t(order()) - v_) % order()); }

    Fp& operator+=(Fp b) { return *this = *this + b; }
    Fp& operator-=(Fp b) { return *this = *this - b; }
    Fp& operator*=(Fp b) { return *this = *this * b; }

    friend bool operator==(Fp a, Fp b) {
        a.require_same_field(b);
        return a.v_ == b.v_;
    }
    friend bool operator!=(Fp a, Fp b) { return !(a == b); }

private:
    Fp raw(std::uint64_t reduced) const noexcept { return Fp(reduced, f_, 0); }
    Fp(std::uint64_t reduced, PrimeField f, int) noexcept
        : f_(f), v_(static_cast<std::uint32_t>(reduced)) {}
    std::uint32_t order() const noexcept { return f_.order(); }
    void require_same_field(Fp other) const {
        if (f_ != other.f_) throw FieldMismatch();
    }

    PrimeField f_;
    std::uint32_t v_;
};

/// Multiplicative inverse. Zero has none and raises std::domain_error.
Fp inverse(Fp a);

/// a^e with the convention 0^0 = 1.
Fp pow(Fp a, std::uint64_t e);

std::ostream& operator<<(std::ostream& os, Fp a);

}  // namespace secrep
