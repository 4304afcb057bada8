use crate::{Error, Result};

/// Which ensemble pair a bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Haar pure on `d` vs. products of two Haar pure states on `sqrt d`.
    PureBipartite,
    /// Reductions with environment dimension `k`.
    Mixed { k: usize },
    /// Haar pure on `d` vs. products of `parts` Haar pure states on `d^{1/K}`.
    Multipartite { parts: usize },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::PureBipartite => "PURE_BIPARTITE",
            Variant::Mixed { .. } => "MIXED",
            Variant::Multipartite { .. } => "MULTIPARTITE",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Variant::PureBipartite => Ok(()),
            Variant::Mixed { k } if k >= 1 => Ok(()),
            Variant::Mixed { .. } => Err(Error::Domain("MIXED needs k >= 1")),
            Variant::Multipartite { parts } if parts >= 2 => Ok(()),
            Variant::Multipartite { .. } => Err(Error::Domain("MULTIPARTITE needs K >= 2")),
        }
    }

    fn k(&self) -> usize {
        match *self {
            Variant::Mixed { k } => k,
            _ => 1,
        }
    }

    fn parts(&self) -> usize {
        match *self {
            Variant::Multipartite { parts } => parts,
            _ => 2,
        }
    }
}

/// Closed-form discrimination bounds for `T` copies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub d: usize,
    pub k: usize,
    pub parts: usize,
    pub copies: usize,
    pub variant: Variant,
    /// Upper bound on the total variation between the two ensembles.
    pub tv: f64,
    /// `1/2 + tv/2`, clipped to `[1/2, 1]`.
    pub le_cam: f64,
    /// Copies needed for success probability 2/3.
    pub min_copies: f64,
}

/// Total-variation upper bound between the entangled and product ensembles
/// after `copies` copies.
pub fn tv_upper_bound(d: usize, copies: usize, variant: Variant) -> Result<BoundReport> {
    if copies < 1 {
        return Err(Error::Domain("need at least one copy"));
    }
    if d < 2 {
        return Err(Error::Domain("need d >= 2"));
    }
    variant.validate()?;
    let t1 = (copies - 1) as f64;
    let d_f = d as f64;
    let tv = match variant {
        Variant::PureBipartite | Variant::Mixed { .. } => {
            let big = d_f * variant.k() as f64;
            2.0 - libm::pow(1.0 + t1 / big, -t1) - libm::pow(1.0 + t1 / libm::sqrt(big), -2.0 * t1)
        }
        Variant::Multipartite { parts } => {
            let kf = parts as f64;
            let local = libm::pow(d_f, 1.0 / kf);
            2.0 - libm::pow(1.0 + t1 / d_f, -t1) - libm::pow(1.0 + t1 / local, -kf * t1)
        }
    };
    Ok(BoundReport {
        d,
        k: variant.k(),
        parts: variant.parts(),
        copies,
        variant,
        tv,
        le_cam: (0.5 + 0.5 * tv).clamp(0.5, 1.0),
        min_copies: min_copies_lower_bound(d, variant)?,
    })
}

/// Copies needed to reach success probability 2/3 (natural logarithm).
pub fn min_copies_lower_bound(d: usize, variant: Variant) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain("need d >= 2"));
    }
    variant.validate()?;
    let ln = libm::log(6.0 / 5.0);
    Ok(match variant {
        Variant::PureBipartite | Variant::Mixed { .. } => {
            let big = (d * variant.k()) as f64;
            libm::sqrt(0.5 * ln) * libm::pow(big, 0.25) + 1.0
        }
        Variant::Multipartite { parts } => {
            let kf = parts as f64;
            libm::sqrt(ln / kf) * libm::pow(d as f64, 1.0 / (2.0 * kf)) + 1.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_copy_gives_nothing() {
        for d in [2, 16, 4096] {
            for v in [
                Variant::PureBipartite,
                Variant::Mixed { k: 3 },
                Variant::Multipartite { parts: 3 },
            ] {
                let r = tv_upper_bound(d, 1, v).unwrap();
                assert_eq!(r.tv, 0.0);
                assert_eq!(r.le_cam, 0.5);
            }
        }
    }

    #[test]
    fn anchor_value() {
        let r = tv_upper_bound(16, 2, Variant::PureBipartite).unwrap();
        assert!((r.tv - (2.0 - 16.0 / 17.0 - 16.0 / 25.0)).abs() < 1e-14);
        assert!((r.le_cam - (0.5 + r.tv / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn min_copies_anchor_values() {
        let v = min_copies_lower_bound(4096, Variant::PureBipartite).unwrap();
        assert!((v - (libm::sqrt(0.5 * libm::log(1.2)) * 8.0 + 1.0)).abs() < 1e-12);
        let m = min_copies_lower_bound(512, Variant::Multipartite { parts: 3 }).unwrap();
        assert!((m - 1.697).abs() < 1e-3);
        let mixed = min_copies_lower_bound(64, Variant::Mixed { k: 4 }).unwrap();
        assert!((mixed - (libm::sqrt(0.5 * libm::log(1.2)) * 4.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(tv_upper_bound(16, 0, Variant::PureBipartite).is_err());
        assert!(tv_upper_bound(1, 2, Variant::PureBipartite).is_err());
        assert!(tv_upper_bound(16, 2, Variant::Mixed { k: 0 }).is_err());
        assert!(tv_upper_bound(16, 2, Variant::Multipartite { parts: 1 }).is_err());
        assert!(min_copies_lower_bound(1, Variant::PureBipartite).is_err());
    }
}
