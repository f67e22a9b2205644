//! Exact N-qubit Pauli group arithmetic.
//!
//! Every group element is stored as `i^a · Z^μ X^ν`, where `Z^μ X^ν` is the
//! tensor product of the single-qubit factors `Z^{μ_k} X^{ν_k}` and `a` is an
//! exponent mod 4. With this normal ordering the group law is pure integer
//! arithmetic: moving `X^ν` past `Z^μ'` costs a factor `(-1)^{ν·μ'}`.
//!
//! Since `Y = i³·ZX`, the Hermitian `+1`-signed representative of a class has
//! `a ≡ 3·#Y (mod 4)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polar::ProjectivePoint;

/// Largest qubit count an observable may carry (both masks fit in one `u64` point).
pub const MAX_QUBITS: usize = 32;

/// An element of the N-qubit Pauli group.
///
/// Qubit `k` (the `k`-th letter, counted from the left) lives at bit `n - 1 - k`
/// of each mask, so masks read in the same order as the string form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliObservable {
    n_qubits: u8,
    phase_exp: u8,
    z_mask: u64,
    x_mask: u64,
}

/// The sign `±1` of a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    /// `0` for `+1`, `1` for `-1`: the right-hand side entry of the linear system.
    pub fn bit(self) -> bool {
        matches!(self, Sign::Minus)
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn mask_limit(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliObservable {
    /// Builds `i^phase_exp · Z^z_mask X^x_mask`.
    pub fn new(n_qubits: usize, phase_exp: u8, z_mask: u64, x_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedRank(n_qubits));
        }
        let limit = mask_limit(n_qubits);
        if z_mask & !limit != 0 || x_mask & !limit != 0 {
            return Err(Error::DimensionMismatch {
                left: n_qubits,
                right: 64 - (z_mask | x_mask).leading_zeros() as usize,
            });
        }
        Ok(Self {
            n_qubits: n_qubits as u8,
            phase_exp: phase_exp % 4,
            z_mask,
            x_mask,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, 0, 0)
    }

    /// The Hermitian, `+1`-signed observable with the given masks.
    pub fn canonical(n_qubits: usize, z_mask: u64, x_mask: u64) -> Result<Self> {
        let y_count = (z_mask & x_mask).count_ones();
        Self::new(n_qubits, ((3 * y_count) % 4) as u8, z_mask, x_mask)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> u32 {
        (self.z_mask & self.x_mask).count_ones()
    }

    pub fn is_identity_class(&self) -> bool {
        self.z_mask == 0 && self.x_mask == 0
    }

    /// Exponent of the scalar prefix in front of the tensor product of letters.
    fn prefix_exp(&self) -> u8 {
        ((self.phase_exp as u32 + 4 - (3 * self.y_count()) % 4) % 4) as u8
    }

    /// True for the Hermitian `+1`-signed representative of the class.
    pub fn is_canonical(&self) -> bool {
        self.prefix_exp() == 0
    }

    /// Phase prefix is `±1`.
    pub fn is_hermitian(&self) -> bool {
        self.prefix_exp().is_multiple_of(2)
    }

    /// Same class, phase reset to the canonical representative.
    pub fn to_canonical(&self) -> Self {
        Self {
            phase_exp: ((3 * self.y_count()) % 4) as u8,
            ..*self
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        Ok(())
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let swaps = (self.x_mask & other.z_mask).count_ones();
        Ok(Self {
            n_qubits: self.n_qubits,
            phase_exp: ((self.phase_exp as u32 + other.phase_exp as u32 + 2 * swaps) % 4) as u8,
            z_mask: self.z_mask ^ other.z_mask,
            x_mask: self.x_mask ^ other.x_mask,
        })
    }

    /// Symplectic product of the masks; zero iff the two operators commute.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        let form = (self.z_mask & other.x_mask).count_ones() + (self.x_mask & other.z_mask).count_ones();
        Ok(form.is_multiple_of(2))
    }

    /// The projective point `(μ | ν)` of the class.
    pub fn to_point(&self) -> Result<ProjectivePoint> {
        if self.is_identity_class() {
            return Err(Error::IdentityHasNoPoint);
        }
        ProjectivePoint::from_masks(self.n_qubits(), self.z_mask, self.x_mask)
    }

    /// The canonical observable labelling `point`.
    pub fn from_point(point: &ProjectivePoint) -> Result<Self> {
        if point.coords() == 0 {
            return Err(Error::ZeroVector);
        }
        Self::canonical(point.n_qubits(), point.z_mask(), point.x_mask())
    }

    /// Letter of qubit `k`, counted from the left.
    pub fn letter(&self, k: usize) -> char {
        let bit = self.n_qubits() - 1 - k;
        match ((self.z_mask >> bit) & 1, (self.x_mask >> bit) & 1) {
            (0, 0) => 'I',
            (0, 1) => 'X',
            (1, 0) => 'Z',
            _ => 'Y',
        }
    }

    /// Letters only, without any sign prefix.
    pub fn letters(&self) -> String {
        (0..self.n_qubits()).map(|k| self.letter(k)).collect()
    }
}

/// Sign of a context: the `s` with `∏ obs = s · I`.
///
/// The observables must pairwise commute, so the product does not depend on the
/// order they are given in.
pub fn context_sign(obs: &[PauliObservable]) -> Result<Sign> {
    let Some(first) = obs.first() else {
        return Ok(Sign::Plus);
    };
    for (i, a) in obs.iter().enumerate() {
        first.check_dims(a)?;
        for b in &obs[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::NotMutuallyCommuting(a.to_string(), b.to_string()));
            }
        }
    }
    let mut product = PauliObservable::identity(first.n_qubits())?;
    for o in obs {
        product = product.multiply(o)?;
    }
    if !product.is_identity_class() {
        return Err(Error::ProductNotIdentity);
    }
    match product.phase_exp {
        0 => Ok(Sign::Plus),
        2 => Ok(Sign::Minus),
        odd => Err(Error::InternalPhaseError(odd)),
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.prefix_exp() {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letters())
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let malformed = || Error::MalformedObservable(text.to_string());
        let (prefix, body) = if let Some(rest) = text.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = text.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = text.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = text.strip_prefix('i') {
            (1, rest)
        } else {
            (0, text)
        };
        if body.is_empty() || body.len() > MAX_QUBITS {
            return Err(malformed());
        }
        let (mut z, mut x) = (0u64, 0u64);
        for c in body.chars() {
            let (zb, xb) = match c {
                'I' => (0, 0),
                'X' => (0, 1),
                'Z' => (1, 0),
                'Y' => (1, 1),
                _ => return Err(malformed()),
            };
            z = (z << 1) | zb;
            x = (x << 1) | xb;
        }
        let y_count = (z & x).count_ones();
        Self::new(body.len(), ((prefix + 3 * y_count) % 4) as u8, z, x)
    }
}

impl serde::Serialize for PauliObservable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliObservable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
