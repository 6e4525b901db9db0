// SPDX-License-Identifier: Apache-2.0
//
// csitl - Monte Carlo link-level simulator for CSIT-limited multi-antenna systems
// Copyright (C) 2026 The csitl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSITL_CHANNEL_HPP
#define CSITL_CHANNEL_HPP

#include "linalg.hpp"
#include "rng.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace csitl
{

struct Point
{
    double x = 0.0; // m
    double y = 0.0; // m

    friend bool operator==(const Point &, const Point &) = default;
};

inline double distance(const Point &a, const Point &b) { return std::hypot(b.x - a.x, b.y - a.y); }

/// Azimuth of `to` seen from `from`, measured from the +x axis (radians).
inline double bearing(const Point &from, const Point &to) { return std::atan2(to.y - from.y, to.x - from.x); }

/// Uniform linear array. Orientation is the boresight azimuth, kept in [0, 2*pi).
class UlaGeometry
{
  public:
    explicit UlaGeometry(int num_elements, double element_spacing = 0.5, double orientation = 0.0, Point position = {})
        : num_elements_(num_elements), element_spacing_(element_spacing), orientation_(normalize_angle(orientation)),
          position_(position)
    {
        if (num_elements < 1)
            throw std::invalid_argument("UlaGeometry: num_elements must be >= 1");
        if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
            throw std::invalid_argument("UlaGeometry: element_spacing must be > 0");
        if (!std::isfinite(orientation) || !std::isfinite(position.x) || !std::isfinite(position.y))
            throw std::invalid_argument("UlaGeometry: orientation and position must be finite");
    }

    int num_elements() const { return num_elements_; }
    double element_spacing() const { return element_spacing_; }
    double orientation() const { return orientation_; }
    const Point &position() const { return position_; }

    UlaGeometry rotated_to(double orientation) const
    {
        return UlaGeometry(num_elements_, element_spacing_, orientation, position_);
    }

  private:
    int num_elements_;
    double element_spacing_;
    double orientation_;
    Point position_;
};

/// Entry m is exp(-j 2 pi d m sin(azimuth - orientation)).
inline CVector steering_vector(const UlaGeometry &geometry, double azimuth)
{
    const int m = geometry.num_elements();
    const double psi = 2.0 * std::numbers::pi * geometry.element_spacing() * std::sin(azimuth - geometry.orientation());
    CVector a(m);
    for (int i = 0; i < m; ++i)
        a(i) = std::polar(1.0, -psi * i);
    return a;
}

/// R(i,j) = r^|i-j|.
inline CMatrix exponential_correlation(int m, double r)
{
    if (m < 1)
        throw std::invalid_argument("exponential_correlation: m must be >= 1");
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("exponential_correlation: r must lie in [0, 1)");
    CMatrix out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out(i, j) = std::pow(r, std::abs(i - j));
    return out;
}

inline constexpr double min_path_loss_distance_m = 1.0;

/// fixed_loss_db + 10 * exponent * log10(d), with d clamped to 1 m.
inline double path_loss_log_distance(double d, double exponent, double fixed_loss_db)
{
    const double dd = std::max(d, min_path_loss_distance_m);
    return fixed_loss_db + 10.0 * exponent * std::log10(dd);
}

/**
 * Statistical description of one MISO link: LoS factor (linear), LoS azimuth,
 * transmit correlation and path loss. R^{1/2} is computed once on construction.
 */
class RicianChannelModel
{
  public:
    RicianChannelModel(double los_factor, double azimuth, CMatrix correlation, double path_loss_db)
        : los_factor_(los_factor), azimuth_(azimuth), correlation_(std::move(correlation)), path_loss_db_(path_loss_db)
    {
        if (!(los_factor >= 0.0))
            throw std::invalid_argument("RicianChannelModel: los_factor must be >= 0");
        if (!std::isfinite(azimuth))
            throw std::invalid_argument("RicianChannelModel: azimuth must be finite");
        if (!(path_loss_db >= 0.0) || !std::isfinite(path_loss_db))
            throw std::invalid_argument("RicianChannelModel: path_loss_db must be finite and >= 0");
        if (correlation_.rows() < 1 || !is_hermitian(correlation_, 1e-12))
            throw std::invalid_argument("RicianChannelModel: correlation must be Hermitian");
        for (Eigen::Index i = 0; i < correlation_.rows(); ++i)
            if (std::abs(correlation_(i, i) - cd(1.0)) > 1e-12)
                throw std::invalid_argument("RicianChannelModel: correlation must have unit diagonal");
        correlation_sqrt_ = hermitian_sqrt(correlation_);
    }

    static RicianChannelModel from_db(double los_factor_db, double azimuth, CMatrix correlation, double path_loss_db)
    {
        return {db_to_linear(los_factor_db), azimuth, std::move(correlation), path_loss_db};
    }

    double los_factor() const { return los_factor_; }
    double azimuth() const { return azimuth_; }
    const CMatrix &correlation() const { return correlation_; }
    const CMatrix &correlation_sqrt() const { return correlation_sqrt_; }
    double path_loss_db() const { return path_loss_db_; }
    int num_elements() const { return static_cast<int>(correlation_.rows()); }

    double path_gain() const { return db_to_linear(-path_loss_db_); }

    /// Amplitude weight of the LoS component, sqrt(k/(1+k)).
    double los_weight() const { return std::isinf(los_factor_) ? 1.0 : std::sqrt(los_factor_ / (1.0 + los_factor_)); }

    /// Amplitude weight of the scattered component, sqrt(1/(1+k)).
    double scatter_weight() const { return std::isinf(los_factor_) ? 0.0 : std::sqrt(1.0 / (1.0 + los_factor_)); }

    /// E[h h^H] = g (k/(1+k) a a^H + 1/(1+k) R).
    CMatrix second_moment(const UlaGeometry &geometry) const
    {
        check_dims(geometry);
        const CVector a = steering_vector(geometry, azimuth_);
        const double g = path_gain();
        const double lw = los_weight(), sw = scatter_weight();
        return g * (lw * lw * (a * a.adjoint()) + sw * sw * correlation_);
    }

    void check_dims(const UlaGeometry &geometry) const
    {
        if (geometry.num_elements() != num_elements())
            throw std::invalid_argument("RicianChannelModel: correlation size does not match array size");
    }

  private:
    double los_factor_;
    double azimuth_;
    CMatrix correlation_;
    CMatrix correlation_sqrt_;
    double path_loss_db_;
};

struct ChannelRealization
{
    CVector coefficients;

    int size() const { return static_cast<int>(coefficients.size()); }
};

/**
 * Precomputed sampler for one (model, geometry) pair:
 * h = mean + scatter * z with mean = sqrt(g k/(1+k)) a and
 * scatter = sqrt(g/(1+k)) R^{1/2}.
 */
class ChannelSampler
{
  public:
    ChannelSampler(const RicianChannelModel &model, const UlaGeometry &geometry)
    {
        model.check_dims(geometry);
        const double amp = std::sqrt(model.path_gain());
        mean_ = amp * model.los_weight() * steering_vector(geometry, model.azimuth());
        scatter_ = amp * model.scatter_weight() * model.correlation_sqrt();
    }

    /// Draws M complex normals from the stream and writes h into `out`.
    void sample(RandomStream &stream, CVector &out) const
    {
        sample_scatter(stream, out);
        out += mean_;
    }

    ChannelRealization sample(RandomStream &stream) const
    {
        ChannelRealization h;
        h.coefficients.resize(mean_.size());
        sample(stream, h.coefficients);
        return h;
    }

    /// Scattered part only, scatter * z, for callers that recombine components.
    void sample_scatter(RandomStream &stream, CVector &out) const
    {
        thread_local CVector z;
        z.resize(mean_.size());
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z(i) = stream.complex_normal();
        out.noalias() = scatter_ * z;
    }

    const CVector &mean() const { return mean_; }
    const CMatrix &scatter() const { return scatter_; }

  private:
    CVector mean_;
    CMatrix scatter_;
};

inline ChannelRealization sample_channel(const RicianChannelModel &model, const UlaGeometry &geometry,
                                         RandomStream &stream)
{
    ChannelSampler sampler(model, geometry);
    return sampler.sample(stream);
}

} // namespace csitl

#endif // CSITL_CHANNEL_HPP
