#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace weylwalk {

enum class FieldTag { Real, Complex, Quaternion };

/// One of the three division algebras R, C, H together with its real
/// dimension d = 1, 2, 4.
struct Field {
    FieldTag tag = FieldTag::Real;
    int d = 1;

    static Field real() { return {FieldTag::Real, 1}; }
    static Field complex_field() { return {FieldTag::Complex, 2}; }
    static Field quaternion() { return {FieldTag::Quaternion, 4}; }

    static Field from_d(int d) {
        switch (d) {
            case 1: return real();
            case 2: return complex_field();
            case 4: return quaternion();
            default: throw std::invalid_argument("field dimension must be 1, 2 or 4, got " + std::to_string(d));
        }
    }

    /// Size factor of the canonical complex embedding (2 for H, else 1).
    int embed_factor() const { return tag == FieldTag::Quaternion ? 2 : 1; }

    const char* name() const {
        switch (tag) {
            case FieldTag::Real: return "R";
            case FieldTag::Complex: return "C";
            default: return "H";
        }
    }

    bool operator==(const Field& o) const { return tag == o.tag; }
    bool operator!=(const Field& o) const { return tag != o.tag; }
};

/// Scalar of F stored with all four quaternion components; entries over R
/// keep x = y = z = 0 and entries over C keep y = z = 0, so one arithmetic
/// path serves all three fields.
struct FScalar {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    FScalar() = default;
    FScalar(double w_) : w(w_) {}
    FScalar(double w_, double x_) : w(w_), x(x_) {}
    FScalar(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    FScalar conj() const { return {w, -x, -y, -z}; }
    double norm2() const { return w * w + x * x + y * y + z * z; }
    double abs() const { return std::sqrt(norm2()); }

    FScalar operator+(const FScalar& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    FScalar operator-(const FScalar& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    FScalar operator-() const { return {-w, -x, -y, -z}; }
    FScalar& operator+=(const FScalar& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }

    FScalar operator*(const FScalar& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }
    FScalar operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    FScalar operator/(double s) const { return {w / s, x / s, y / s, z / s}; }
};

inline FScalar operator*(double s, const FScalar& q) { return q * s; }

} // namespace weylwalk
