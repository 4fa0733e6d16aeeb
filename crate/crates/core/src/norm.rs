use crate::vector::Vector;

/// The three norms the solver works with, identified by name so configs can
/// carry them around.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormId {
    L1,
    L2,
    LInf,
}

impl NormId {
    /// Dual pairing: l1 and l-infinity swap, l2 is self-dual.
    pub fn dual(self) -> NormId {
        match self {
            NormId::L1 => NormId::LInf,
            NormId::L2 => NormId::L2,
            NormId::LInf => NormId::L1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormId::L1 => "l1",
            NormId::L2 => "l2",
            NormId::LInf => "linf",
        }
    }
}

impl std::str::FromStr for NormId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "l1" => Ok(NormId::L1),
            "l2" => Ok(NormId::L2),
            "linf" => Ok(NormId::LInf),
            other => Err(format!("unknown norm '{other}' (expected l1, l2, or linf)")),
        }
    }
}

impl std::fmt::Display for NormId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `‖x‖_p`. Non-negative; zero exactly on the zero vector.
pub fn norm(p: NormId, x: &Vector) -> f64 {
    match p {
        NormId::L1 => x.iter().map(|v| v.abs()).sum(),
        NormId::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        NormId::LInf => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

/// `‖x‖_{p*}`, the dual norm of `p`.
pub fn dual_norm(p: NormId, x: &Vector) -> f64 {
    norm(p.dual(), x)
}
