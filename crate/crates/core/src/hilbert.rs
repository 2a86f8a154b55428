//! Compact 3D Hilbert curve keys.
//!
//! Lattice points with up to 21 bits per axis are mapped onto a single
//! non-negative 63-bit code that fits a signed 64-bit integer. The curve is
//! the transpose-based variant (Skilling's formulation): it starts at the
//! origin and consecutive codes always decode to lattice points at L1
//! distance one.

use crate::error::{Error, Result};
use crate::geometry::Point3;

pub const MAX_ORDER: u32 = 21;
pub const DIMS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl LatticePoint {
    pub const fn new(i: u32, j: u32, k: u32) -> Self {
        Self { i, j, k }
    }

    fn axes(self) -> [u32; 3] {
        [self.i, self.j, self.k]
    }

    pub fn l1_distance(self, other: Self) -> u32 {
        self.i.abs_diff(other.i) + self.j.abs_diff(other.j) + self.k.abs_diff(other.k)
    }
}

/// A 63-bit curve position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertCode(i64);

impl HilbertCode {
    pub fn new(code: i64) -> Result<Self> {
        if code < 0 {
            return Err(Error::OutOfRange(format!("negative Hilbert code {code}")));
        }
        Ok(Self(code))
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// Hilbert curve of a fixed order (bits per axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertCurve {
    order: u32,
}

impl Default for HilbertCurve {
    fn default() -> Self {
        Self { order: MAX_ORDER }
    }
}

impl HilbertCurve {
    pub fn new(order: u32) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::OutOfRange(format!(
                "curve order {order} outside 1..={MAX_ORDER}"
            )));
        }
        Ok(Self { order })
    }

    pub fn order(self) -> u32 {
        self.order
    }

    /// Number of lattice points per axis.
    pub fn side(self) -> u32 {
        1 << self.order
    }

    /// Total number of codes, `8^order`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u64 {
        1u64 << (DIMS as u32 * self.order)
    }

    pub fn encode(self, p: LatticePoint) -> Result<HilbertCode> {
        let side = self.side();
        if p.i >= side || p.j >= side || p.k >= side {
            return Err(Error::OutOfRange(format!(
                "lattice point ({}, {}, {}) exceeds {} bits per axis",
                p.i, p.j, p.k, self.order
            )));
        }
        let x = axes_to_transpose(p.axes(), self.order);
        Ok(HilbertCode(interleave(x, self.order) as i64))
    }

    pub fn decode(self, h: HilbertCode) -> Result<LatticePoint> {
        let code = h.0 as u64;
        if h.0 < 0 || code >= self.len() {
            return Err(Error::OutOfRange(format!(
                "code {} outside curve of order {}",
                h.0, self.order
            )));
        }
        let [i, j, k] = transpose_to_axes(deinterleave(code, self.order), self.order);
        Ok(LatticePoint { i, j, k })
    }
}

/// Encodes at the full 21-bit order.
pub fn h_encode(p: LatticePoint) -> Result<HilbertCode> {
    HilbertCurve::default().encode(p)
}

/// Decodes at the full 21-bit order.
pub fn h_decode(h: HilbertCode) -> Result<LatticePoint> {
    HilbertCurve::default().decode(h)
}

fn axes_to_transpose(mut x: [u32; 3], order: u32) -> [u32; 3] {
    let m = 1u32 << (order - 1);
    // inverse undo
    let mut q = m;
    while q > 1 {
        let p = q - 1;
        for i in 0..DIMS {
            if x[i] & q != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q >>= 1;
    }
    // gray encode
    for i in 1..DIMS {
        x[i] ^= x[i - 1];
    }
    let mut t = 0;
    let mut q = m;
    while q > 1 {
        if x[DIMS - 1] & q != 0 {
            t ^= q - 1;
        }
        q >>= 1;
    }
    for v in &mut x {
        *v ^= t;
    }
    x
}

fn transpose_to_axes(mut x: [u32; 3], order: u32) -> [u32; 3] {
    let n = 2u32 << (order - 1);
    // gray decode
    let t = x[DIMS - 1] >> 1;
    for i in (1..DIMS).rev() {
        x[i] ^= x[i - 1];
    }
    x[0] ^= t;
    // undo excess work
    let mut q = 2;
    while q != n {
        let p = q - 1;
        for i in (0..DIMS).rev() {
            if x[i] & q != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q <<= 1;
    }
    x
}

fn interleave(x: [u32; 3], order: u32) -> u64 {
    let mut code = 0u64;
    for bit in (0..order).rev() {
        for v in x {
            code = (code << 1) | u64::from((v >> bit) & 1);
        }
    }
    code
}

fn deinterleave(code: u64, order: u32) -> [u32; 3] {
    let mut x = [0u32; 3];
    for bit in 0..order {
        for (d, v) in x.iter_mut().enumerate() {
            let shift = bit * DIMS as u32 + (DIMS - 1 - d) as u32;
            *v |= (((code >> shift) & 1) as u32) << bit;
        }
    }
    x
}

/// Affine map from a model-space bounding box onto the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantizer {
    min: Point3,
    max: Point3,
    bits: u32,
}

impl Quantizer {
    pub fn new(min: Point3, max: Point3, bits: u32) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&bits) {
            return Err(Error::InvalidArgument(format!(
                "bits per axis {bits} outside 1..={MAX_ORDER}"
            )));
        }
        for k in 0..3 {
            if !(min[k].is_finite() && max[k].is_finite() && min[k] < max[k]) {
                return Err(Error::InvalidArgument(format!(
                    "quantizer box needs finite min < max on axis {k}, got [{}, {}]",
                    min[k], max[k]
                )));
            }
        }
        Ok(Self { min, max, bits })
    }

    /// Box with the default 21 bits per axis.
    pub fn with_box(min: Point3, max: Point3) -> Result<Self> {
        Self::new(min, max, MAX_ORDER)
    }

    pub fn min(&self) -> Point3 {
        self.min
    }

    pub fn max(&self) -> Point3 {
        self.max
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn curve(&self) -> HilbertCurve {
        HilbertCurve { order: self.bits }
    }

    /// Returns the lattice point and whether any axis had to be clamped.
    pub fn quantize_clamped(&self, p: Point3) -> Result<(LatticePoint, bool)> {
        let top = f64::from((1u32 << self.bits) - 1);
        let mut out = [0u32; 3];
        let mut clamped = false;
        for k in 0..3 {
            let v = p[k];
            if v.is_nan() {
                return Err(Error::InvalidInput(format!("NaN coordinate on axis {k}")));
            }
            let scaled = (v - self.min[k]) / (self.max[k] - self.min[k]) * top;
            // round half up
            let r = (scaled + 0.5).floor();
            let c = if r < 0.0 {
                clamped = true;
                0.0
            } else if r > top {
                clamped = true;
                top
            } else {
                r
            };
            out[k] = c as u32;
        }
        Ok((LatticePoint::new(out[0], out[1], out[2]), clamped))
    }

    pub fn quantize(&self, p: Point3) -> Result<LatticePoint> {
        self.quantize_clamped(p).map(|(lp, _)| lp)
    }

    /// `h_encode(quantize(p))` at this quantizer's order.
    pub fn code_of(&self, p: Point3) -> Result<(HilbertCode, bool)> {
        let (lp, clamped) = self.quantize_clamped(p)?;
        Ok((self.curve().encode(lp)?, clamped))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn all_points(order: u32) -> impl Iterator<Item = LatticePoint> {
        let side = 1u32 << order;
        (0..side).flat_map(move |i| {
            (0..side).flat_map(move |j| (0..side).map(move |k| LatticePoint::new(i, j, k)))
        })
    }

    #[test]
    fn origin_is_code_zero() {
        for order in 1..=MAX_ORDER {
            let c = HilbertCurve::new(order).unwrap();
            assert_eq!(c.encode(LatticePoint::new(0, 0, 0)).unwrap().value(), 0);
            assert_eq!(
                c.decode(HilbertCode(0)).unwrap(),
                LatticePoint::new(0, 0, 0)
            );
        }
    }

    #[test]
    fn order_one_is_a_permutation_of_0_to_7() {
        let c = HilbertCurve::new(1).unwrap();
        let mut codes: Vec<i64> = all_points(1)
            .map(|p| c.encode(p).unwrap().value())
            .collect();
        codes.sort_unstable();
        assert_eq!(codes, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn small_orders_are_bijective_and_adjacent() {
        for order in 1..=4 {
            let c = HilbertCurve::new(order).unwrap();
            let mut seen = HashSet::new();
            for p in all_points(order) {
                let h = c.encode(p).unwrap();
                assert!((h.value() as u64) < c.len());
                assert!(seen.insert(h));
                assert_eq!(c.decode(h).unwrap(), p);
            }
            assert_eq!(seen.len() as u64, c.len());
            for h in 1..c.len() as i64 {
                let a = c.decode(HilbertCode(h - 1)).unwrap();
                let b = c.decode(HilbertCode(h)).unwrap();
                assert_eq!(a.l1_distance(b), 1, "order {order}, codes {} -> {h}", h - 1);
            }
        }
    }

    #[test]
    fn full_order_codes_fit_signed_64() {
        let top = (1u32 << MAX_ORDER) - 1;
        let h = h_encode(LatticePoint::new(top, top, top)).unwrap();
        assert!(h.value() >= 0);
        let max = h_encode(h_decode(HilbertCode(i64::MAX)).unwrap()).unwrap();
        assert_eq!(max.value(), i64::MAX);
    }

    #[test]
    fn out_of_range_inputs() {
        assert!(h_encode(LatticePoint::new(1 << 21, 0, 0)).is_err());
        assert!(HilbertCurve::new(2)
            .unwrap()
            .decode(HilbertCode(64))
            .is_err());
        assert!(HilbertCode::new(-1).is_err());
        assert!(HilbertCurve::new(0).is_err());
        assert!(HilbertCurve::new(22).is_err());
    }

    #[test]
    fn quantize_corners_and_midpoint() {
        let q = Quantizer::with_box([0.0; 3], [1.0; 3]).unwrap();
        assert_eq!(q.quantize([0.0; 3]).unwrap(), LatticePoint::new(0, 0, 0));
        let top = (1 << 21) - 1;
        assert_eq!(
            q.quantize([1.0; 3]).unwrap(),
            LatticePoint::new(top, top, top)
        );
        // 0.5 * (2^21 - 1) = 1048575.5 rounds half up to 2^20
        let q2 = Quantizer::with_box([0.0; 3], [2.0; 3]).unwrap();
        let mid = 1u32 << 20;
        assert_eq!(
            q2.quantize([1.0; 3]).unwrap(),
            LatticePoint::new(mid, mid, mid)
        );
    }

    #[test]
    fn quantize_clamps_and_rejects_nan() {
        let q = Quantizer::with_box([0.0; 3], [1.0; 3]).unwrap();
        let (lp, clamped) = q.quantize_clamped([-0.5, 0.5, 2.0]).unwrap();
        assert!(clamped);
        assert_eq!(lp.i, 0);
        assert_eq!(lp.k, (1 << 21) - 1);
        assert!(q.quantize([f64::NAN, 0.0, 0.0]).is_err());
        assert!(Quantizer::with_box([0.0; 3], [0.0, 1.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_full_order(i in 0u32..(1 << 21), j in 0u32..(1 << 21), k in 0u32..(1 << 21)) {
            let p = LatticePoint::new(i, j, k);
            let h = h_encode(p).unwrap();
            prop_assert_eq!(h_decode(h).unwrap(), p);
            prop_assert_eq!(h_encode(p).unwrap(), h);
        }

        #[test]
        fn quantize_is_monotone(a in -0.5f64..1.5, b in -0.5f64..1.5) {
            let q = Quantizer::with_box([0.0; 3], [1.0; 3]).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let ql = q.quantize([lo, lo, lo]).unwrap();
            let qh = q.quantize([hi, hi, hi]).unwrap();
            prop_assert!(ql.i <= qh.i && ql.j <= qh.j && ql.k <= qh.k);
        }
    }
}
