//! Contracting plane similitudes, their composition algebra and the
//! commensurability analysis of rotation angles.
//!
//! Maps are stored in translation form `z ↦ a·z + b` with
//! `a = ratio·e^{i·angle}`. The center form `z ↦ a·(z − c) + c` used by
//! most presentations is available through [`Similitude::from_center`] and
//! [`Similitude::center`].

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::point::{normalize_radians, Point};
use crate::{Error, Result};

/// A rotation angle, either an exact rational multiple of π or a raw value
/// in radians.
///
/// Exact angles are kept reduced with the multiple of π in `[0, 2)`;
/// approximate angles are kept in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// `value · π`, reduced, `0 ≤ value < 2`.
    Exact(Rational64),
    /// Radians in `[0, 2π)`.
    Radians(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Exact(Rational64::new_raw(0, 1));

    /// `num/den · π`.
    pub fn pi_fraction(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAngle("zero denominator".into()));
        }
        Ok(Angle::Exact(reduce_turn(Rational64::new(num, den))))
    }

    pub fn radians(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidAngle(format!("non-finite radians {value}")));
        }
        Ok(Angle::Radians(normalize_radians(value)))
    }

    /// Exact angle from a reduced multiple of π (normalizes into `[0, 2)`).
    pub fn from_pi_multiple(r: Rational64) -> Self {
        Angle::Exact(reduce_turn(r))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact(_))
    }

    /// The multiple of π for exact angles.
    pub fn as_pi_multiple(&self) -> Option<Rational64> {
        match *self {
            Angle::Exact(r) => Some(r),
            Angle::Radians(_) => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match *self {
            Angle::Exact(r) => *r.numer() as f64 / *r.denom() as f64 * PI,
            Angle::Radians(v) => v,
        }
    }

    /// `(cos, sin)`, exact for multiples of π/2.
    pub fn cos_sin(&self) -> (f64, f64) {
        if let Angle::Exact(r) = *self {
            let quarter = r * 2;
            if quarter.is_integer() {
                return match quarter.to_integer().rem_euclid(4) {
                    0 => (1.0, 0.0),
                    1 => (0.0, 1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                };
            }
        }
        let (s, c) = self.to_radians().sin_cos();
        (c, s)
    }

    pub fn add(&self, other: &Angle) -> Angle {
        match (*self, *other) {
            (Angle::Exact(a), Angle::Exact(b)) => Angle::Exact(reduce_turn(a + b)),
            _ => Angle::Radians(normalize_radians(self.to_radians() + other.to_radians())),
        }
    }

    pub fn neg(&self) -> Angle {
        match *self {
            Angle::Exact(a) => Angle::Exact(reduce_turn(-a)),
            Angle::Radians(v) => Angle::Radians(normalize_radians(-v)),
        }
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        self.add(&other.neg())
    }

    /// Angle reduced modulo π, in `[0, π)`; used for undirected line directions.
    pub fn mod_pi(&self) -> Angle {
        match *self {
            Angle::Exact(a) => {
                let one = Rational64::from_integer(1);
                Angle::Exact(if a >= one { a - one } else { a })
            }
            Angle::Radians(v) => Angle::Radians(if v >= PI { v - PI } else { v }),
        }
    }

    /// True when the angle is a multiple of 2π: exactly for exact angles, to
    /// within `tol` radians otherwise.
    pub fn is_full_turn(&self, tol: f64) -> bool {
        match *self {
            Angle::Exact(a) => a.numer() == &0,
            Angle::Radians(v) => v.min(TAU - v) <= tol,
        }
    }

    /// Human-readable exact form, e.g. `π·1/3`.
    pub fn exact_label(&self) -> Option<String> {
        self.as_pi_multiple()
            .map(|r| format!("π·{}/{}", r.numer(), r.denom()))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(r) if *r.numer() == 0 => write!(f, "0"),
            Angle::Exact(r) => write!(f, "{}π/{}", r.numer(), r.denom()),
            Angle::Radians(v) => write!(f, "{v}"),
        }
    }
}

fn reduce_turn(r: Rational64) -> Rational64 {
    let two = Rational64::from_integer(2);
    let k = (r / two).floor();
    r - k * two
}

/// gcd of two nonnegative rationals: `gcd(a·d, c·b) / (b·d)`.
fn rational_gcd(x: Rational64, y: Rational64) -> Rational64 {
    let (a, b) = (*x.numer(), *x.denom());
    let (c, d) = (*y.numer(), *y.denom());
    Rational64::new((a * d).gcd(&(c * b)), b * d)
}

/// One contracting, orientation-preserving similitude of the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similitude {
    ratio: f64,
    angle: Angle,
    linear: Complex64,
    offset: Complex64,
}

impl Similitude {
    /// `z ↦ ratio·e^{i·angle}·z + offset`.
    pub fn from_offset(ratio: f64, angle: Angle, offset: Point) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidSimilitude(format!(
                "ratio {ratio} outside (0, 1)"
            )));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidSimilitude("non-finite offset".into()));
        }
        Ok(Self::from_parts(ratio, angle, offset.into()))
    }

    /// `z ↦ ratio·e^{i·angle}·(z − center) + center`.
    pub fn from_center(ratio: f64, angle: Angle, center: Point) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidSimilitude("non-finite center".into()));
        }
        let a = linear_part(ratio, &angle);
        let c: Complex64 = center.into();
        Self::from_offset(ratio, angle, (c * (1.0 - a)).into())
    }

    fn from_parts(ratio: f64, angle: Angle, offset: Complex64) -> Self {
        Self {
            ratio,
            angle,
            linear: linear_part(ratio, &angle),
            offset,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    /// The translation part `b`.
    pub fn offset(&self) -> Point {
        self.offset.into()
    }

    /// The linear part `a = ratio·e^{i·angle}` as a complex number.
    pub fn linear(&self) -> Complex64 {
        self.linear
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        (self.linear * Complex64::from(p) + self.offset).into()
    }

    /// Preimage of `p`.
    #[inline]
    pub fn apply_inverse(&self, p: Point) -> Point {
        ((Complex64::from(p) - self.offset) / self.linear).into()
    }

    /// Applies only the rotation part to a direction vector.
    #[inline]
    pub fn rotate(&self, v: Point) -> Point {
        let (c, s) = self.angle.cos_sin();
        Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similitude) -> Similitude {
        Self::from_parts(
            self.ratio * inner.ratio,
            self.angle.add(&inner.angle),
            self.linear * inner.offset + self.offset,
        )
    }

    /// The unique fixed point `b / (1 − a)`.
    pub fn fixed_point(&self) -> Point {
        (self.offset / (1.0 - self.linear)).into()
    }

    /// Alias for [`fixed_point`](Self::fixed_point): the center in center form.
    pub fn center(&self) -> Point {
        self.fixed_point()
    }
}

fn linear_part(ratio: f64, angle: &Angle) -> Complex64 {
    let (c, s) = angle.cos_sin();
    Complex64::new(ratio * c, ratio * s)
}

/// A finite index sequence naming `φ_{i₁} ∘ … ∘ φ_{i_p}`. Indices are
/// zero-based internally and printed one-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AddressWord(pub Vec<usize>);

impl AddressWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn push(&self, i: usize) -> AddressWord {
        let mut v = self.0.clone();
        v.push(i);
        AddressWord(v)
    }

    pub fn concat(&self, other: &AddressWord) -> AddressWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        AddressWord(v)
    }

    pub fn starts_with(&self, prefix: &AddressWord) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// One-based indices, as printed in reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for AddressWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// An ordered, nonempty list of contracting similitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct IfsSystem {
    maps: Vec<Similitude>,
    q: f64,
}

impl IfsSystem {
    pub fn new(maps: Vec<Similitude>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidArgument(
                "system needs at least one map".into(),
            ));
        }
        let q = maps.iter().map(Similitude::ratio).fold(0.0, f64::max);
        Ok(Self { maps, q })
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Contraction bound `q = max ratio`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn map(&self, i: usize) -> &Similitude {
        &self.maps[i]
    }

    /// Fixed points of the individual maps, in order.
    pub fn fixed_points(&self) -> Vec<Point> {
        self.maps.iter().map(Similitude::fixed_point).collect()
    }

    /// `φ_{i₁} ∘ … ∘ φ_{i_p}`.
    pub fn compose_word(&self, w: &AddressWord) -> Result<Similitude> {
        let (&first, rest) = w.0.split_first().ok_or(Error::EmptyWord)?;
        let mut acc = *self.get(first)?;
        for &i in rest {
            acc = acc.compose(self.get(i)?);
        }
        Ok(acc)
    }

    fn get(&self, i: usize) -> Result<&Similitude> {
        self.maps.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.maps.len(),
        })
    }

    pub fn all_exact(&self) -> bool {
        self.maps.iter().all(|m| m.angle().is_exact())
    }

    /// gcd θ of all rotation angles and π, or `None` when some angle is not
    /// an exact rational multiple of π.
    pub fn angle_gcd(&self) -> Option<Angle> {
        let mut g = Rational64::from_integer(1);
        for m in &self.maps {
            g = rational_gcd(g, m.angle().as_pi_multiple()?);
        }
        Some(Angle::Exact(g))
    }

    /// Generator of the rotation group spanned by the angles, as a multiple
    /// of π in `(0, 2]` (`2` means the group is trivial).
    pub(crate) fn rotation_step(&self) -> Option<Rational64> {
        let mut g = Rational64::from_integer(2);
        for m in &self.maps {
            g = rational_gcd(g, m.angle().as_pi_multiple()?);
        }
        Some(g)
    }

    /// All words of length `p` in lexicographic order.
    pub fn words(&self, p: usize) -> impl Iterator<Item = AddressWord> + '_ {
        let n = self.maps.len();
        let total = (n as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut k| {
            let mut v = vec![0; p];
            for slot in v.iter_mut().rev() {
                *slot = (k % n as u128) as usize;
                k /= n as u128;
            }
            AddressWord(v)
        })
    }
}
