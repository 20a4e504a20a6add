#pragma once

namespace qgs {

/// Global numerical cutoff policy. Singular values at or below
/// rank_rel * sigma_max are treated as zero everywhere: rank and kernel
/// extraction, exceptional-point detection, compatibility analysis and
/// degenerate-transfer detection all share this one knob.
struct Tolerance {
    double rank_rel = 1e-10;

    /// Reads QGS_TOLERANCE from the environment, falling back to the default.
    static Tolerance from_env();
};

} // namespace qgs
