#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gnr/jet.hpp"

namespace gnr {

using Vec3 = Eigen::Vector3d;

/// A 3-vector whose components are jets.
template <int N>
using JetVec3 = std::array<Jet<N>, 3>;

template <int N>
Jet<N> dot(const JetVec3<N>& a, const JetVec3<N>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <int N>
JetVec3<N> cross(const JetVec3<N>& a, const JetVec3<N>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <int N>
JetVec3<N> scale(const JetVec3<N>& a, const Jet<N>& k) {
    return {a[0] * k, a[1] * k, a[2] * k};
}

template <int N>
JetVec3<N - 1> differentiate(const JetVec3<N>& a) {
    return {a[0].differentiate(), a[1].differentiate(), a[2].differentiate()};
}

template <int M, int N>
JetVec3<M> truncate(const JetVec3<N>& a) {
    return {a[0].template truncate<M>(), a[1].template truncate<M>(), a[2].template truncate<M>()};
}

template <int N>
Vec3 values(const JetVec3<N>& a) {
    return {a[0].value(), a[1].value(), a[2].value()};
}

template <int N>
Vec3 derivatives(const JetVec3<N>& a, int k = 1) {
    return {a[0].derivative(k), a[1].derivative(k), a[2].derivative(k)};
}

inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

}  // namespace gnr
