//! Linear coding schemes achieving the exact-case rate regions.
//!
//! A scheme sends n symbols per path per block (block length n) and encodes
//! k1 high-priority and k2 low-priority message symbols with one generator
//! matrix of shape (k1+k2) x (E*n); columns i*n .. (i+1)*n belong to path
//! i+1. Rates are R1 = k1*C/n and R2 = k2*C/n.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{classify, region, CaseLabel};
use crate::error::{Error, Result};
use crate::field::{FieldOrder, Matrix};
use crate::patterns::{kappa, BlockagePattern, Grouping, NetworkConfig};
use crate::rational::{rat_int, rat_to_string, Rational};

/// Generator matrix for an (n_out, k) code in which every k columns are
/// invertible: identity for k = n_out, repetition for k = 1, Vandermonde on
/// distinct points otherwise (which needs n_out <= field order).
pub fn mds_generator(n_out: usize, k: usize, field: FieldOrder) -> Result<Matrix> {
    if k == 0 || k > n_out {
        return Err(Error::InvalidCodeParameters(format!(
            "mds generator needs 1 <= k <= n_out, got k={k}, n_out={n_out}"
        )));
    }
    if k == n_out {
        return Ok(Matrix::identity(field, k));
    }
    if k == 1 {
        let mut m = Matrix::zero(field, 1, n_out);
        for c in 0..n_out {
            m.set(0, c, 1);
        }
        return Ok(m);
    }
    if n_out > field.order() {
        return Err(Error::InvalidCodeParameters(format!(
            "a {n_out}-point Vandermonde code does not fit in GF({})",
            field.order()
        )));
    }
    let mut m = Matrix::zero(field, k, n_out);
    for (c, point) in (0..n_out as u8).enumerate() {
        for r in 0..k {
            m.set(r, c, field.pow(point, r as u32));
        }
    }
    Ok(m)
}

/// Smallest supported field admitting Vandermonde codes over `e` paths.
fn mds_field(e: usize) -> Result<FieldOrder> {
    if e <= 4 {
        Ok(FieldOrder::Q4)
    } else if e <= 256 {
        Ok(FieldOrder::Q256)
    } else {
        Err(Error::InvalidCodeParameters(format!(
            "no supported field admits MDS codes over {e} paths"
        )))
    }
}

/// Message pair: u1 is required under group-1 patterns, (u1, u2) under group 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub u1: Vec<u8>,
    pub u2: Vec<u8>,
}

impl Message {
    pub fn random<R: Rng>(k1: usize, k2: usize, field: FieldOrder, rng: &mut R) -> Message {
        let q = field.order() as u32;
        let draw = |rng: &mut R| (rng.gen_range(0..q)) as u8;
        Message {
            u1: (0..k1).map(|_| draw(rng)).collect(),
            u2: (0..k2).map(|_| draw(rng)).collect(),
        }
    }
}

/// Per-path symbol sequences; `None` marks an erased symbol on a blocked path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTransmission {
    per_path: Vec<Vec<Option<u8>>>,
    mask: BlockagePattern,
}

impl PathTransmission {
    pub fn new(per_path: Vec<Vec<Option<u8>>>, mask: BlockagePattern) -> Result<PathTransmission> {
        if per_path.len() != mask.num_paths() {
            return Err(Error::InvalidInput(format!(
                "{} symbol sequences for a {}-path mask",
                per_path.len(),
                mask.num_paths()
            )));
        }
        let n = per_path.first().map_or(0, Vec::len);
        for (i, sytms) in per_path.iter().enumerate() {
            if sytms.len() != n {
                return Err(Error::InvalidInput("ragged per-path symbol counts".into()));
            }
            let unblocked = mask.is_unblocked(i);
            if unblocked && sytms.iter().any(Option::is_none) {
                return Err(Error::InvalidInput(format!(
                    "erased symbol on unblocked path {}",
                    i + 1
                )));
            }
            if !unblocked && sytms.iter().any(Option::is_some) {
                return Err(Error::InvalidInput(format!(
                    "readable symbol on blocked path {}",
                    i + 1
                )));
            }
        }
        Ok(PathTransmission { per_path, mask })
    }

    pub fn per_path(&self) -> &[Vec<Option<u8>>] {
        &self.per_path
    }

    pub fn mask(&self) -> &BlockagePattern {
        &self.mask
    }

    /// The same transmission as observed under `mask`: anything on a path
    /// blocked by `mask` becomes erased.
    pub fn erase(&self, mask: &BlockagePattern) -> Result<PathTransmission> {
        if mask.num_paths() != self.mask.num_paths() {
            return Err(Error::InvalidInput("mask length mismatch".into()));
        }
        let per_path = self
            .per_path
            .iter()
            .enumerate()
            .map(|(i, syms)| {
                if mask.is_unblocked(i) && self.mask.is_unblocked(i) {
                    syms.clone()
                } else {
                    vec![None; syms.len()]
                }
            })
            .collect();
        let combined: Vec<bool> = (0..mask.num_paths())
            .map(|i| mask.is_unblocked(i) && self.mask.is_unblocked(i))
            .collect();
        PathTransmission::new(per_path, BlockagePattern::new(combined)?)
    }
}

/// Decoder output; a missing entry means that message is not recoverable from
/// the unblocked paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub u1: Option<Vec<u8>>,
    pub u2: Option<Vec<u8>>,
}

/// Linear block scheme over E paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingScheme {
    num_paths: usize,
    block_length: usize,
    field: FieldOrder,
    k1: usize,
    k2: usize,
    generator: Matrix,
    construction_tag: String,
}

/// Serialized form of a scheme (the path count comes from the network config
/// it is used with).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SchemeJson {
    pub block_length: usize,
    pub construction_tag: String,
    pub field_order: usize,
    pub generator: Vec<u8>,
    pub k1: usize,
    pub k2: usize,
}

impl CodingScheme {
    pub fn new(
        num_paths: usize,
        block_length: usize,
        field: FieldOrder,
        k1: usize,
        k2: usize,
        generator: Matrix,
        construction_tag: impl Into<String>,
    ) -> Result<CodingScheme> {
        if num_paths < 2 {
            return Err(Error::InvalidCodeParameters(format!(
                "need at least 2 paths, got {num_paths}"
            )));
        }
        if block_length == 0 {
            return Err(Error::InvalidCodeParameters("block length must be positive".into()));
        }
        if generator.rows() != k1 + k2 || generator.cols() != num_paths * block_length {
            return Err(Error::InvalidCodeParameters(format!(
                "generator is {}x{}, expected {}x{}",
                generator.rows(),
                generator.cols(),
                k1 + k2,
                num_paths * block_length
            )));
        }
        if generator.field() != field {
            return Err(Error::InvalidCodeParameters("generator field mismatch".into()));
        }
        Ok(CodingScheme {
            num_paths,
            block_length,
            field,
            k1,
            k2,
            generator,
            construction_tag: construction_tag.into(),
        })
    }

    pub fn num_paths(&self) -> usize {
        self.num_paths
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn field(&self) -> FieldOrder {
        self.field
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn construction_tag(&self) -> &str {
        &self.construction_tag
    }

    /// (R1, R2) = (k1, k2) * C / n.
    pub fn rate_pair(&self, capacity: &Rational) -> (Rational, Rational) {
        let n = rat_int(self.block_length as i64);
        (
            rat_int(self.k1 as i64) * capacity / &n,
            rat_int(self.k2 as i64) * capacity / &n,
        )
    }

    /// Column indices carried by the given 0-based path.
    fn path_columns(&self, path: usize) -> std::ops::Range<usize> {
        path * self.block_length..(path + 1) * self.block_length
    }

    pub fn to_json(&self) -> SchemeJson {
        SchemeJson {
            block_length: self.block_length,
            construction_tag: self.construction_tag.clone(),
            field_order: self.field.order(),
            generator: self.generator.as_flat().to_vec(),
            k1: self.k1,
            k2: self.k2,
        }
    }

    pub fn from_json(j: &SchemeJson, num_paths: usize) -> Result<CodingScheme> {
        let field = FieldOrder::from_order(j.field_order)?;
        let generator = Matrix::from_flat(
            field,
            j.k1 + j.k2,
            num_paths * j.block_length,
            j.generator.clone(),
        )?;
        CodingScheme::new(
            num_paths,
            j.block_length,
            field,
            j.k1,
            j.k2,
            generator,
            j.construction_tag.clone(),
        )
    }
}

/// Encodes a message into per-path symbol sequences (nothing blocked yet).
pub fn encode(scheme: &CodingScheme, msg: &Message) -> Result<PathTransmission> {
    if msg.u1.len() != scheme.k1 || msg.u2.len() != scheme.k2 {
        return Err(Error::InvalidInput(format!(
            "message sizes ({}, {}) do not match scheme ({}, {})",
            msg.u1.len(),
            msg.u2.len(),
            scheme.k1,
            scheme.k2
        )));
    }
    let mut row = Vec::with_capacity(scheme.k1 + scheme.k2);
    row.extend_from_slice(&msg.u1);
    row.extend_from_slice(&msg.u2);
    for &v in &row {
        scheme.field.check_element(v)?;
    }
    let flat = scheme.generator.left_mul_vec(&row)?;
    let per_path = (0..scheme.num_paths)
        .map(|i| flat[scheme.path_columns(i)].iter().map(|&v| Some(v)).collect())
        .collect();
    PathTransmission::new(per_path, BlockagePattern::all_ones(scheme.num_paths)?)
}

/// Decodes whatever the unblocked paths allow: u1 alone, or both messages.
pub fn decode(scheme: &CodingScheme, received: &PathTransmission) -> Result<DecodeOutcome> {
    if received.per_path().len() != scheme.num_paths {
        return Err(Error::InvalidInput(format!(
            "transmission covers {} paths, scheme has {}",
            received.per_path().len(),
            scheme.num_paths
        )));
    }
    if received.per_path().iter().any(|s| s.len() != scheme.block_length) {
        return Err(Error::InvalidInput("per-path symbol count differs from block length".into()));
    }
    let mask = received.mask();
    let mut cols = Vec::new();
    let mut symbols = Vec::new();
    for path in 0..scheme.num_paths {
        if !mask.is_unblocked(path) {
            continue;
        }
        for (offset, col) in scheme.path_columns(path).enumerate() {
            let sym = received.per_path()[path][offset]
                .ok_or_else(|| Error::InvalidInput("erased symbol on unblocked path".into()))?;
            scheme.field.check_element(sym)?;
            cols.push(col);
            symbols.push(sym);
        }
    }
    let k = scheme.k1 + scheme.k2;
    let g_b = scheme.generator.select_columns(&cols)?;

    // u1 is recoverable iff the first k1 unit vectors lie in the column space
    // of the received generator columns.
    let mut selector = Matrix::zero(scheme.field, k, scheme.k1);
    for j in 0..scheme.k1 {
        selector.set(j, j, 1);
    }
    let u1 = g_b
        .solve_right(&selector)?
        .map(|x| x.left_mul_vec(&symbols))
        .transpose()?;

    // Both messages are recoverable iff the received columns have full rank.
    let u2 = g_b
        .solve_right(&Matrix::identity(scheme.field, k))?
        .map(|x| x.left_mul_vec(&symbols))
        .transpose()?
        .map(|m| m[scheme.k1..].to_vec());

    Ok(DecodeOutcome { u1, u2 })
}

// Internal helper for laying out generators construction by construction.
struct Builder {
    scheme_paths: usize,
    n: usize,
    k1: usize,
    gen: Matrix,
}

#[derive(Clone, Copy)]
enum Slot {
    U1(usize),
    U2(usize),
}

impl Builder {
    fn new(e: usize, n: usize, field: FieldOrder, k1: usize, k2: usize) -> Builder {
        Builder { scheme_paths: e, n, k1, gen: Matrix::zero(field, k1 + k2, e * n) }
    }

    fn set(&mut self, path: usize, use_t: usize, slot: Slot, coeff: u8) {
        debug_assert!(path < self.scheme_paths && use_t < self.n);
        let row = match slot {
            Slot::U1(j) => j,
            Slot::U2(j) => self.k1 + j,
        };
        let col = path * self.n + use_t;
        self.gen.set(row, col, coeff);
    }
}

/// Builds the chunked-MDS scheme placing `layout` message symbols (at most
/// `chunk_cap` per block position) as MDS codewords across all paths.
fn chunked_mds(
    e: usize,
    n: usize,
    k1: usize,
    k2: usize,
    chunk_cap: usize,
    tag: &str,
) -> Result<CodingScheme> {
    let total = k1 + k2;
    if chunk_cap == 0 || total > chunk_cap * n {
        return Err(Error::InvalidCodeParameters(format!(
            "{total} symbols do not fit in {n} positions of capacity {chunk_cap}"
        )));
    }
    let mut chunk_sizes = Vec::new();
    let mut left = total;
    for _ in 0..n {
        let c = left.min(chunk_cap);
        chunk_sizes.push(c);
        left -= c;
    }
    let needs_vandermonde = chunk_sizes.iter().any(|&c| c > 1 && c < e);
    let field = if needs_vandermonde { mds_field(e)? } else { FieldOrder::Q2 };
    let mut b = Builder::new(e, n, field, k1, k2);
    let mut next = 0usize;
    for (t, &csize) in chunk_sizes.iter().enumerate() {
        if csize == 0 {
            continue;
        }
        let g = mds_generator(e, csize, field)?;
        for j in 0..csize {
            let idx = next + j;
            let slot = if idx < k1 { Slot::U1(idx) } else { Slot::U2(idx - k1) };
            for path in 0..e {
                b.set(path, t, slot, g.get(j, path));
            }
        }
        next += csize;
    }
    CodingScheme::new(e, n, field, k1, k2, b.gen, tag)
}

/// One copy of u1 on each path in `u1_paths`, u2 on `u2_path` (block length 1).
fn duplicate_scheme(e: usize, u1_paths: &[usize], u2_path: usize, tag: &str) -> Result<CodingScheme> {
    let mut b = Builder::new(e, 1, FieldOrder::Q2, 1, 1);
    for &p in u1_paths {
        b.set(p, 0, Slot::U1(0), 1);
    }
    b.set(u2_path, 0, Slot::U2(0), 1);
    CodingScheme::new(e, 1, FieldOrder::Q2, 1, 1, b.gen, tag)
}

/// u1 on `s`, u2 on the lowest other path, u1+u2 on the remaining path.
fn xor_scheme(s: usize) -> Result<CodingScheme> {
    let t = (0..3).find(|&p| p != s).expect("three paths");
    let r = (0..3).find(|&p| p != s && p != t).expect("three paths");
    let mut b = Builder::new(3, 1, FieldOrder::Q2, 1, 1);
    b.set(s, 0, Slot::U1(0), 1);
    b.set(t, 0, Slot::U2(0), 1);
    b.set(r, 0, Slot::U1(0), 1);
    b.set(r, 0, Slot::U2(0), 1);
    CodingScheme::new(3, 1, FieldOrder::Q2, 1, 1, b.gen, "network-coding")
}

/// u1 split across the unblocked paths of `b1`, u2 split across the rest.
fn split_scheme(b1: &BlockagePattern) -> Result<CodingScheme> {
    let e = b1.num_paths();
    let k1 = b1.unblocked_count();
    let k2 = e - k1;
    let mut b = Builder::new(e, 1, FieldOrder::Q2, k1, k2);
    let (mut i1, mut i2) = (0, 0);
    for path in 0..e {
        if b1.is_unblocked(path) {
            b.set(path, 0, Slot::U1(i1), 1);
            i1 += 1;
        } else {
            b.set(path, 0, Slot::U2(i2), 1);
            i2 += 1;
        }
    }
    CodingScheme::new(e, 1, FieldOrder::Q2, k1, k2, b.gen, "split")
}

/// Superposition for the coverage-condition case: a fraction of the block
/// repeats u1 on every path, the rest carries u2 as per-position MDS codes.
fn superposition_scheme(
    e: usize,
    kappa2: usize,
    alpha: &Rational,
    tag: &str,
) -> Result<CodingScheme> {
    // alpha = fraction of block positions spent on u1 repetition.
    let n = alpha.denom().try_into().map_err(|_| {
        Error::InvalidCodeParameters("target denominator too large for a block length".into())
    })?;
    let n: usize = n;
    let k1: usize = alpha
        .numer()
        .try_into()
        .map_err(|_| Error::InvalidCodeParameters("negative share of block positions".into()))?;
    let k2 = kappa2 * (n - k1);
    let needs_vandermonde = kappa2 > 1 && kappa2 < e && n > k1;
    let field = if needs_vandermonde { mds_field(e)? } else { FieldOrder::Q2 };
    let mut b = Builder::new(e, n, field, k1, k2);
    for t in 0..k1 {
        for path in 0..e {
            b.set(path, t, Slot::U1(t), 1);
        }
    }
    if k1 < n {
        let g = mds_generator(e, kappa2, field)?;
        for (chunk, t) in (k1..n).enumerate() {
            for j in 0..kappa2 {
                for path in 0..e {
                    b.set(path, t, Slot::U2(chunk * kappa2 + j), g.get(j, path));
                }
            }
        }
    }
    CodingScheme::new(e, n, field, k1, k2, b.gen, tag)
}

/// Block-interleaves two schemes: a fraction `weight` of the combined block
/// uses `a`, the rest uses `b`. Schemes must agree on path count and field.
pub fn timeshare(a: &CodingScheme, b: &CodingScheme, weight: &Rational) -> Result<CodingScheme> {
    if weight.is_negative() || weight > &rat_int(1) {
        return Err(Error::InvalidInput(format!(
            "time-share weight must lie in [0, 1], got {}",
            rat_to_string(weight)
        )));
    }
    if a.num_paths != b.num_paths {
        return Err(Error::InvalidInput("time-share: path count mismatch".into()));
    }
    if a.field != b.field {
        return Err(Error::InvalidInput("time-share: field mismatch".into()));
    }
    if weight.is_one() {
        return Ok(a.clone());
    }
    if weight.is_zero() {
        return Ok(b.clone());
    }
    let e = a.num_paths;
    let x: usize = weight.numer().try_into().expect("checked range");
    let y: usize = weight.denom().try_into().map_err(|_| {
        Error::InvalidInput("time-share weight denominator too large".into())
    })?;
    let l = a.block_length.lcm(&b.block_length);
    let copies_a = x * l / a.block_length;
    let copies_b = (y - x) * l / b.block_length;
    let n = y * l;
    let k1 = copies_a * a.k1 + copies_b * b.k1;
    let k2 = copies_a * a.k2 + copies_b * b.k2;
    let field = a.field;
    let mut gen = Matrix::zero(field, k1 + k2, e * n);

    // Copy m of scheme s occupies block positions [offset, offset + s.n) and
    // message rows m*s.k1.. within the u1 section (u2 analogously).
    let mut place = |s: &CodingScheme, copies: usize, use_base: usize, u1_base: usize, u2_base: usize| {
        for m in 0..copies {
            let offset = use_base + m * s.block_length;
            for row in 0..s.k1 + s.k2 {
                let grow = if row < s.k1 {
                    u1_base + m * s.k1 + row
                } else {
                    k1 + u2_base + m * s.k2 + (row - s.k1)
                };
                for path in 0..e {
                    for t in 0..s.block_length {
                        let v = s.generator.get(row, path * s.block_length + t);
                        if v != 0 {
                            gen.set(grow, path * n + offset + t, v);
                        }
                    }
                }
            }
        }
    };
    place(a, copies_a, 0, 0, 0);
    place(b, copies_b, copies_a * a.block_length, copies_a * a.k1, copies_a * a.k2);
    CodingScheme::new(e, n, field, k1, k2, gen, "timeshare")
}

// Lifts a GF(2) placement scheme to a larger field (coefficients 0/1 keep
// their meaning in any field), so it can be time-shared with MDS schemes.
fn lift_field(s: &CodingScheme, field: FieldOrder) -> Result<CodingScheme> {
    if s.field == field {
        return Ok(s.clone());
    }
    if s.field != FieldOrder::Q2 {
        return Err(Error::InvalidInput("only GF(2) schemes can be lifted".into()));
    }
    let gen = Matrix::from_flat(
        field,
        s.generator.rows(),
        s.generator.cols(),
        s.generator.as_flat().to_vec(),
    )?;
    CodingScheme::new(s.num_paths, s.block_length, field, s.k1, s.k2, gen, s.construction_tag.clone())
}

fn empty_scheme(e: usize) -> Result<CodingScheme> {
    CodingScheme::new(e, 1, FieldOrder::Q2, 0, 0, Matrix::zero(FieldOrder::Q2, 0, e), "empty")
}

fn usize_num(r: &Rational) -> Result<usize> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::InvalidInput(format!(
            "expected a non-negative integer, got {}",
            rat_to_string(r)
        )));
    }
    r.numer()
        .try_into()
        .map_err(|_| Error::InvalidInput("value too large".into()))
}

/// Smallest block length turning both capacity fractions into whole symbol
/// counts, with the resulting (n, k1, k2).
fn symbol_counts(f1: &Rational, f2: &Rational) -> Result<(usize, usize, usize)> {
    let too_big = || Error::InvalidCodeParameters("target denominator too large for a block length".into());
    let d1: usize = f1.denom().try_into().map_err(|_| too_big())?;
    let d2: usize = f2.denom().try_into().map_err(|_| too_big())?;
    let n = d1.lcm(&d2);
    let k1 = usize_num(&(f1 * rat_int(n as i64)))?;
    let k2 = usize_num(&(f2 * rat_int(n as i64)))?;
    Ok((n, k1, k2))
}

/// Builds a scheme hitting `target` = (R1, R2) exactly. The target must be
/// the origin, a corner point of the exact region, or a boundary point where
/// some region inequality is tight; anything else is rejected.
pub fn build_scheme(
    g: &Grouping,
    cfg: &NetworkConfig,
    r1: &Rational,
    r2: &Rational,
) -> Result<CodingScheme> {
    let label = classify(g, cfg)?;
    let reg = region(g, cfg)?;
    if reg.exactness() != crate::capacity::Exactness::ExactClosedForm {
        return Err(Error::UnsupportedCase(format!(
            "no construction is known for case {label}; only the cut-set outer bound is available"
        )));
    }
    let e = cfg.num_paths();
    let c = cfg.capacity();
    if r1.is_zero() && r2.is_zero() {
        return empty_scheme(e);
    }
    if !reg.contains(r1, r2)? {
        return Err(Error::UnachievableTarget(format!(
            "({}, {}) lies outside the rate region",
            rat_to_string(r1),
            rat_to_string(r2)
        )));
    }
    if reg.tight_inequalities(r1, r2).is_empty() {
        return Err(Error::UnachievableTarget(format!(
            "({}, {}) lies strictly inside the region; constructions target boundary points",
            rat_to_string(r1),
            rat_to_string(r2)
        )));
    }

    let f1 = r1 / c;
    let f2 = r2 / c;

    match label {
        CaseLabel::G2Empty => {
            // Region forces r2 = 0; pack u1 over enough block positions.
            let (k1cap, _) = kappa(g.group1())?;
            let (n, k1, _) = symbol_counts(&f1, &f2)?;
            chunked_mds(e, n, k1, 0, k1cap, "mds")
        }
        CaseLabel::G1Empty => {
            let (k2cap, _) = kappa(g.group2())?;
            let (n, k1, k2) = symbol_counts(&f1, &f2)?;
            chunked_mds(e, n, k1, k2, k2cap, "mds")
        }
        CaseLabel::C1Holds => {
            let (kappa2, _) = kappa(g.group2())?;
            superposition_scheme(e, kappa2, &f1, "superposition")
        }
        CaseLabel::Case2SingletonG1
        | CaseLabel::Case2LargeG1Kappa2Eq2
        | CaseLabel::Case3LargeG1Kappa2Eq3 => {
            let (kappa1, _) = kappa(g.group1())?;
            let (kappa2, _) = kappa(g.group2())?;
            if label == CaseLabel::Case2SingletonG1 && kappa1 == kappa2 {
                // Single sum constraint: any boundary split works as one code.
                let (n, k1, k2) = symbol_counts(&f1, &f2)?;
                return chunked_mds(e, n, k1, k2, kappa2, "mds");
            }
            let corner_scheme = |pt: &(Rational, Rational)| -> Result<CodingScheme> {
                build_exact_corner(g, label, kappa1, kappa2, e, c, pt)
            };
            let target = (r1.clone(), r2.clone());
            if let Some(pt) = reg.corner_points().iter().find(|p| **p == target) {
                return corner_scheme(pt);
            }
            // Boundary but not a corner: time-share the two corners of the
            // tight face.
            let tight = reg.tight_inequalities(r1, r2);
            let face = tight[0];
            let endpoints: Vec<(Rational, Rational)> = reg
                .corner_points()
                .iter()
                .filter(|(p1, p2)| face.a1() * p1 + face.a2() * p2 == face.bound() * c)
                .cloned()
                .collect();
            if endpoints.len() != 2 {
                return Err(Error::UnachievableTarget(format!(
                    "no face of the region spans ({}, {})",
                    rat_to_string(r1),
                    rat_to_string(r2)
                )));
            }
            let (pa, pb) = (&endpoints[0], &endpoints[1]);
            let weight = if pa.0 != pb.0 {
                (r1 - &pb.0) / (&pa.0 - &pb.0)
            } else {
                (r2 - &pb.1) / (&pa.1 - &pb.1)
            };
            let sa = corner_scheme(pa)?;
            let sb = corner_scheme(pb)?;
            let field = sa.field().max(sb.field());
            timeshare(&lift_field(&sa, field)?, &lift_field(&sb, field)?, &weight)
        }
        CaseLabel::ExternalSmallG1 | CaseLabel::AllPatterns | CaseLabel::Unsupported => {
            unreachable!("rejected above: region is not exact")
        }
    }
}

// Corner constructions for the three-path cases without the coverage condition.
fn build_exact_corner(
    g: &Grouping,
    label: CaseLabel,
    kappa1: usize,
    kappa2: usize,
    e: usize,
    c: &Rational,
    pt: &(Rational, Rational),
) -> Result<CodingScheme> {
    let f1 = &pt.0 / c;
    let f2 = &pt.1 / c;
    if f2.is_zero() {
        // (kappa1*C, 0): u1 alone, protected against the worst group-1 pattern.
        let k1 = usize_num(&f1)?;
        return chunked_mds(e, 1, k1, 0, kappa1, "mds");
    }
    if f1.is_zero() {
        // (0, kappa2*C): u2 alone, protected against the worst group-2 pattern.
        let k2 = usize_num(&f2)?;
        return chunked_mds(e, 1, 0, k2, kappa2, "mds");
    }
    // Middle corner (kappa1*C, (kappa2-kappa1)*C).
    match label {
        CaseLabel::Case2SingletonG1 => {
            let b1 = g.group1().iter().next().expect("singleton group 1").clone();
            if kappa2 == 2 {
                let s = *b1.unblocked_set().iter().next().expect("non-empty") - 1;
                xor_scheme(s)
            } else {
                split_scheme(&b1)
            }
        }
        CaseLabel::Case2LargeG1Kappa2Eq2 | CaseLabel::Case3LargeG1Kappa2Eq3 => {
            let singles: Vec<usize> = g
                .group1()
                .iter()
                .filter(|b| b.unblocked_count() == 1)
                .map(|b| *b.unblocked_set().iter().next().unwrap() - 1)
                .collect();
            let tag = if label == CaseLabel::Case2LargeG1Kappa2Eq2 {
                "appendix-b"
            } else {
                "appendix-c"
            };
            let u1_paths: Vec<usize> = match singles.len() {
                2 => singles,
                1 => {
                    let s = singles[0];
                    let t = (0..e).find(|&p| p != s).expect("three paths");
                    vec![s, t]
                }
                _ => {
                    return Err(Error::UnsupportedCase(
                        "unexpected group-1 structure for this case".into(),
                    ))
                }
            };
            let u2_path = (0..e)
                .find(|p| !u1_paths.contains(p))
                .expect("one path left for u2");
            duplicate_scheme(e, &u1_paths, u2_path, tag)
        }
        _ => unreachable!("middle corners only exist in the three-path cases"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn cfg3() -> NetworkConfig {
        NetworkConfig::new(3, rat_int(1), vec![0.1, 0.2, 0.3]).unwrap()
    }

    fn instance_coverage() -> Grouping {
        Grouping::parse(&["100", "010", "101", "011"], &["110", "111"]).unwrap()
    }

    fn instance_two_path_bottleneck() -> Grouping {
        Grouping::parse(&["100", "010", "110", "011"], &["101", "111"]).unwrap()
    }

    fn instance_three_path_bottleneck() -> Grouping {
        Grouping::parse(&["100", "010", "110", "011"], &["111"]).unwrap()
    }

    #[test]
    fn mds_generator_shapes() {
        let id = mds_generator(3, 3, FieldOrder::Q2).unwrap();
        assert_eq!(id, Matrix::identity(FieldOrder::Q2, 3));
        let rep = mds_generator(3, 1, FieldOrder::Q2).unwrap();
        assert_eq!(rep, Matrix::from_rows(FieldOrder::Q2, &[vec![1, 1, 1]]).unwrap());
        assert!(mds_generator(3, 2, FieldOrder::Q2).is_err());
        assert!(mds_generator(3, 0, FieldOrder::Q4).is_err());
        assert!(mds_generator(2, 3, FieldOrder::Q4).is_err());
    }

    fn assert_mds(m: &Matrix) {
        let k = m.rows();
        let n = m.cols();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let sub = m.select_columns(&idx).unwrap();
            assert_eq!(sub.rank(), k, "columns {idx:?} are singular");
            // next k-combination of 0..n
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn mds_generators_have_invertible_column_subsets() {
        for (n, k, f) in [
            (3, 2, FieldOrder::Q4),
            (3, 2, FieldOrder::Q256),
            (3, 3, FieldOrder::Q2),
            (4, 2, FieldOrder::Q4),
            (4, 3, FieldOrder::Q4),
            (5, 2, FieldOrder::Q256),
            (5, 3, FieldOrder::Q256),
            (3, 1, FieldOrder::Q2),
        ] {
            assert_mds(&mds_generator(n, k, f).unwrap());
        }
    }

    #[test]
    fn duplicate_placement_scheme() {
        let g = instance_two_path_bottleneck();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(s.construction_tag(), "appendix-b");
        assert_eq!((s.k1(), s.k2(), s.block_length()), (1, 1, 1));
        // u1 on paths 1 and 2, u2 on path 3.
        assert_eq!(s.generator().as_flat(), &[1, 1, 0, 0, 0, 1]);
        assert_eq!(s.rate_pair(&rat_int(1)), (rat_int(1), rat_int(1)));
    }

    #[test]
    fn three_path_bottleneck_corner_scheme() {
        let g = instance_three_path_bottleneck();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(s.construction_tag(), "appendix-c");
        assert_eq!(s.generator().as_flat(), &[1, 1, 0, 0, 0, 1]);

        let top = build_scheme(&g, &cfg3(), &rat_int(0), &rat_int(3)).unwrap();
        assert_eq!((top.k1(), top.k2()), (0, 3));
        assert_eq!(top.field(), FieldOrder::Q2); // identity needs no Vandermonde
    }

    #[test]
    fn xor_corner_scheme() {
        let g = Grouping::parse(&["100"], &["011"]).unwrap();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(s.construction_tag(), "network-coding");
        // u1 on p1, u2 on p2, u1+u2 on p3.
        assert_eq!(s.generator().as_flat(), &[1, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn split_corner_scheme() {
        let g = Grouping::parse(&["110"], &["111"]).unwrap();
        let s = build_scheme(&g, &cfg3(), &rat_int(2), &rat_int(1)).unwrap();
        assert_eq!(s.construction_tag(), "split");
        assert_eq!((s.k1(), s.k2()), (2, 1));
        // u1 parts on paths 1-2, u2 on path 3.
        assert_eq!(s.generator().as_flat(), &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn superposition_face_point() {
        let g = instance_coverage();
        let s = build_scheme(&g, &cfg3(), &rat(1, 2), &rat_int(1)).unwrap();
        assert_eq!(s.construction_tag(), "superposition");
        assert_eq!((s.k1(), s.k2(), s.block_length()), (1, 2, 2));
        assert_eq!(s.field(), FieldOrder::Q4);
        assert_eq!(s.rate_pair(&rat_int(1)), (rat(1, 2), rat_int(1)));

        let corner = build_scheme(&g, &cfg3(), &rat_int(0), &rat_int(2)).unwrap();
        assert_eq!((corner.k1(), corner.k2(), corner.block_length()), (0, 2, 1));
        let bottom = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(0)).unwrap();
        assert_eq!((bottom.k1(), bottom.k2(), bottom.block_length()), (1, 0, 1));
    }

    #[test]
    fn target_rejections() {
        let g = instance_coverage();
        let c = cfg3();
        assert!(matches!(
            build_scheme(&g, &c, &rat_int(2), &rat_int(2)),
            Err(Error::UnachievableTarget(_))
        ));
        assert!(matches!(
            build_scheme(&g, &c, &rat(1, 2), &rat(1, 2)),
            Err(Error::UnachievableTarget(_))
        ));
        let external = Grouping::parse(&["100", "110"], &["011", "101"]).unwrap();
        assert!(matches!(
            build_scheme(&external, &c, &rat_int(1), &rat_int(0)),
            Err(Error::UnsupportedCase(_))
        ));
        let empty_target = build_scheme(&g, &c, &rat_int(0), &rat_int(0)).unwrap();
        assert_eq!(empty_target.construction_tag(), "empty");
        assert_eq!((empty_target.k1(), empty_target.k2()), (0, 0));
    }

    #[test]
    fn encode_examples() {
        let g = Grouping::parse(&["100"], &["011"]).unwrap();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(1)).unwrap();
        let t = encode(&s, &Message { u1: vec![1], u2: vec![1] }).unwrap();
        assert_eq!(
            t.per_path(),
            &[vec![Some(1)], vec![Some(1)], vec![Some(0)]]
        );
        let zero = encode(&s, &Message { u1: vec![0], u2: vec![0] }).unwrap();
        assert!(zero.per_path().iter().all(|p| p.iter().all(|&x| x == Some(0))));
        assert!(encode(&s, &Message { u1: vec![], u2: vec![1] }).is_err());
    }

    #[test]
    fn encode_is_linear() {
        let g = instance_coverage();
        let s = build_scheme(&g, &cfg3(), &rat(1, 2), &rat_int(1)).unwrap();
        let f = s.field();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let ma = Message::random(s.k1(), s.k2(), f, &mut rng);
            let mb = Message::random(s.k1(), s.k2(), f, &mut rng);
            let sum = Message {
                u1: ma.u1.iter().zip(&mb.u1).map(|(&a, &b)| f.add(a, b)).collect(),
                u2: ma.u2.iter().zip(&mb.u2).map(|(&a, &b)| f.add(a, b)).collect(),
            };
            let ta = encode(&s, &ma).unwrap();
            let tb = encode(&s, &mb).unwrap();
            let tsum = encode(&s, &sum).unwrap();
            for p in 0..3 {
                for t in 0..s.block_length() {
                    assert_eq!(
                        tsum.per_path()[p][t].unwrap(),
                        f.add(ta.per_path()[p][t].unwrap(), tb.per_path()[p][t].unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn decode_under_masks() {
        let g = Grouping::parse(&["100"], &["011"]).unwrap();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat_int(1)).unwrap();
        let msg = Message { u1: vec![1], u2: vec![1] };
        let t = encode(&s, &msg).unwrap();

        let full = decode(&s, &t).unwrap();
        assert_eq!(full.u1, Some(vec![1]));
        assert_eq!(full.u2, Some(vec![1]));

        // Paths 2 and 3 carry u2 and u1+u2.
        let partial = decode(&s, &t.erase(&"011".parse().unwrap()).unwrap()).unwrap();
        assert_eq!(partial.u1, Some(vec![1]));
        assert_eq!(partial.u2, Some(vec![1]));

        // Path 3 alone carries only the sum.
        let starved = decode(&s, &t.erase(&"001".parse().unwrap()).unwrap()).unwrap();
        assert_eq!(starved.u1, None);
        assert_eq!(starved.u2, None);

        // Path 1 alone gives u1 but not u2.
        let high_only = decode(&s, &t.erase(&"100".parse().unwrap()).unwrap()).unwrap();
        assert_eq!(high_only.u1, Some(vec![1]));
        assert_eq!(high_only.u2, None);
    }

    #[test]
    fn round_trip_all_required_patterns() {
        let cfg = cfg3();
        let groupings = [
            instance_coverage(),
            instance_two_path_bottleneck(),
            instance_three_path_bottleneck(),
            Grouping::parse(&["100"], &["011"]).unwrap(),
            Grouping::parse(&["110"], &["111"]).unwrap(),
            Grouping::parse(&[], &["110", "111"]).unwrap(),
            Grouping::parse(&["010", "001"], &[]).unwrap(),
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for g in &groupings {
            let reg = region(g, &cfg).unwrap();
            for (r1, r2) in reg.corner_points() {
                let s = build_scheme(g, &cfg, r1, r2).unwrap();
                for _ in 0..20 {
                    let msg = Message::random(s.k1(), s.k2(), s.field(), &mut rng);
                    let t = encode(&s, &msg).unwrap();
                    for b in g.group1() {
                        let out = decode(&s, &t.erase(b).unwrap()).unwrap();
                        assert_eq!(out.u1.as_ref(), Some(&msg.u1), "u1 under {b} for {s:?}");
                    }
                    for b in g.group2() {
                        let out = decode(&s, &t.erase(b).unwrap()).unwrap();
                        assert_eq!(out.u1.as_ref(), Some(&msg.u1), "u1 under {b}");
                        assert_eq!(out.u2.as_ref(), Some(&msg.u2), "u2 under {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn timeshare_examples() {
        let g = instance_two_path_bottleneck();
        let cfg = cfg3();
        let mid = build_scheme(&g, &cfg, &rat_int(1), &rat_int(1)).unwrap();
        let bottom = build_scheme(&g, &cfg, &rat_int(1), &rat_int(0)).unwrap();

        assert_eq!(timeshare(&mid, &bottom, &rat_int(1)).unwrap(), mid);
        assert_eq!(timeshare(&mid, &bottom, &rat_int(0)).unwrap(), bottom);
        assert!(timeshare(&mid, &bottom, &rat(3, 2)).is_err());

        let half = timeshare(&mid, &bottom, &rat(1, 2)).unwrap();
        assert_eq!(half.rate_pair(&rat_int(1)), (rat_int(1), rat(1, 2)));
        assert_eq!(half.block_length(), 2);

        // The mixed scheme still serves every required pattern.
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let msg = Message::random(half.k1(), half.k2(), half.field(), &mut rng);
        let t = encode(&half, &msg).unwrap();
        for b in g.group2() {
            let out = decode(&half, &t.erase(b).unwrap()).unwrap();
            assert_eq!(out.u2, Some(msg.u2.clone()));
        }
    }

    #[test]
    fn boundary_non_corner_targets_time_share() {
        let g = instance_two_path_bottleneck();
        let s = build_scheme(&g, &cfg3(), &rat_int(1), &rat(1, 2)).unwrap();
        assert_eq!(s.construction_tag(), "timeshare");
        assert_eq!(s.rate_pair(&rat_int(1)), (rat_int(1), rat(1, 2)));

        let s = build_scheme(&g, &cfg3(), &rat(1, 2), &rat(3, 2)).unwrap();
        assert_eq!(s.rate_pair(&rat_int(1)), (rat(1, 2), rat(3, 2)));
    }

    #[test]
    fn scheme_json_round_trip() {
        let g = instance_coverage();
        let s = build_scheme(&g, &cfg3(), &rat(1, 2), &rat_int(1)).unwrap();
        let j = s.to_json();
        let back = CodingScheme::from_json(&j, 3).unwrap();
        assert_eq!(back, s);
        let serialized = serde_json::to_string(&j).unwrap();
        let parsed: SchemeJson = serde_json::from_str(&serialized).unwrap();
        assert_eq!(parsed, j);

        let mut bad = j.clone();
        bad.generator.pop();
        assert!(CodingScheme::from_json(&bad, 3).is_err());
    }

    #[test]
    fn joint_code_when_minima_coincide() {
        // kappa1 = kappa2 = 2: the region collapses to R1 + R2 <= 2C.
        let g = Grouping::parse(&["110"], &["011", "111"]).unwrap();
        let cfg = cfg3();
        for (r1, r2) in [(rat_int(2), rat_int(0)), (rat_int(0), rat_int(2)), (rat_int(1), rat_int(1))] {
            let s = build_scheme(&g, &cfg, &r1, &r2).unwrap();
            assert_eq!(s.rate_pair(&rat_int(1)), (r1, r2));
            assert_eq!(s.construction_tag(), "mds");
        }
    }
}
