//! Explicit partition of `P_I` for a monomial ideal in three variables whose
//! Stanley depth exceeds that of `P_{S/I}`.
//!
//! Everything works on a box `[0, g]` holding the maximal elements `M` of
//! `P_{S/I}`. Cases are handled in a canonical coordinate order; the
//! permutation used is recorded and undone before intervals are emitted.
//! Recursive calls act on a slab `[lo, g]` re-based at the origin.

use std::fmt;

use super::{alpha_unchecked, ideal_poset, quotient_poset, GridError, GridInterval, GridPartition, Multidegree};

type P3 = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum N3Case {
    /// `g` itself is in `P_{S/I}`, so `P_I` is empty.
    EmptyIdeal,
    /// No maximal elements remain: the whole box is one interval.
    WholeBox,
    /// `alpha(M) = 0`: one column per `(c(1), c(2))` along the last axis.
    Columns,
    /// `alpha(M) = 2`: a single interval `[c, g]`.
    AlphaTwo,
    /// `M = {b}` with `alpha(b) = 1`: the intervals `I_1` and `I_2`.
    SingleAlphaOne,
    /// Some `b` has `alpha(b) = 2`: drop the slab below `b` and recurse.
    PeelAlphaTwo,
    /// `alpha(M) = 1`: emit `J = [s, t]` and recurse above `t(3)`.
    SplitJ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct N3Step {
    pub case: N3Case,
    /// Coordinate `j` of the canonical frame is original coordinate
    /// `permutation[j]`.
    pub permutation: [usize; 3],
    /// Origin of the slab the step acted on, in original coordinates.
    pub offset: Multidegree,
    pub emitted: Vec<GridInterval>,
}

impl fmt::Display for N3Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.permutation.map(|i| i + 1);
        write!(f, "{:?} at offset {} with coordinates ({},{},{})", self.case, self.offset, p[0], p[1], p[2])?;
        for iv in &self.emitted {
            write!(f, " {iv}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct N3Construction {
    pub partition: GridPartition,
    /// Smallest `alpha` over the maximal elements of `P_{S/I}`; `None` when
    /// `P_{S/I}` is empty.
    pub alpha_m: Option<usize>,
    pub trace: Vec<N3Step>,
}

/// Partitions `P_I` for the ideal generated by `gens` inside `[0, g]`.
pub fn n3_construct(gens: &[Multidegree], g: &Multidegree) -> Result<N3Construction, GridError> {
    if g.n() != 3 {
        return Err(GridError::NotThreeDimensional(g.n()));
    }
    if gens.is_empty() {
        return Err(GridError::NoGenerators);
    }
    // validates dimensions and bounds
    ideal_poset(gens, g)?;
    let quotient = quotient_poset(gens, g)?;
    let m: Vec<P3> = quotient.maximal_points().iter().map(to_p3).collect();
    let g3 = to_p3(g);
    let alpha_m = m.iter().map(|b| alpha_unchecked(b, &g3)).min();
    let mut builder = Builder { trace: Vec::new(), out: Vec::new() };
    if quotient.is_empty() {
        builder.emit(N3Case::WholeBox, IDENTITY, [0; 3], vec![([0; 3], g3)]);
    } else {
        builder.construct(g3, m, [0; 3]);
    }
    let intervals = builder.out.iter().map(|&(a, b)| GridInterval::new(from_p3(a), from_p3(b))).collect();
    Ok(N3Construction { partition: GridPartition { g: g.clone(), intervals }, alpha_m, trace: builder.trace })
}

const IDENTITY: [usize; 3] = [0, 1, 2];

fn to_p3(c: &Multidegree) -> P3 {
    [c.get(0), c.get(1), c.get(2)]
}

fn from_p3(c: P3) -> Multidegree {
    Multidegree::new(c.to_vec())
}

/// Canonical-frame view of `c` under `perm`.
fn permute(c: P3, perm: [usize; 3]) -> P3 {
    perm.map(|i| c[i])
}

fn unpermute(c: P3, perm: [usize; 3]) -> P3 {
    let mut out = [0; 3];
    for (j, &i) in perm.iter().enumerate() {
        out[i] = c[j];
    }
    out
}

fn le(a: P3, b: P3) -> bool {
    a.iter().zip(&b).all(|(x, y)| x <= y)
}

fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

struct Builder {
    trace: Vec<N3Step>,
    out: Vec<(P3, P3)>,
}

impl Builder {
    /// Records intervals given in the canonical frame of a slab at `offset`.
    fn emit(&mut self, case: N3Case, perm: [usize; 3], offset: P3, intervals: Vec<(P3, P3)>) {
        let real: Vec<(P3, P3)> = intervals
            .into_iter()
            .map(|(a, b)| (add(unpermute(a, perm), offset), add(unpermute(b, perm), offset)))
            .collect();
        self.trace.push(N3Step {
            case,
            permutation: perm,
            offset: from_p3(offset),
            emitted: real.iter().map(|&(a, b)| GridInterval::new(from_p3(a), from_p3(b))).collect(),
        });
        self.out.extend(real);
    }

    /// Partitions `[0, g] - D[m]`, where `m` is an antichain inside the box.
    fn construct(&mut self, g: P3, m: Vec<P3>, offset: P3) {
        if m.is_empty() {
            self.emit(N3Case::WholeBox, IDENTITY, offset, vec![([0; 3], g)]);
            return;
        }
        if m.contains(&g) {
            self.emit(N3Case::EmptyIdeal, IDENTITY, offset, Vec::new());
            return;
        }
        let alpha = |b: &P3| alpha_unchecked(b, &g);
        let alpha_m = m.iter().map(alpha).min().expect("nonempty");

        if alpha_m == 0 {
            let mut columns = Vec::new();
            for i in 0..=g[0] {
                for j in 0..=g[1] {
                    // lowest point of the column outside D[M]; P_I is an up set
                    let k = m.iter().filter(|b| i <= b[0] && j <= b[1]).map(|b| b[2] + 1).max().unwrap_or(0);
                    if k <= g[2] {
                        columns.push(([i, j, k], [i, j, g[2]]));
                    }
                }
            }
            self.emit(N3Case::Columns, IDENTITY, offset, columns);
            return;
        }

        if alpha_m == 2 {
            let mut c = [0; 3];
            for (i, ci) in c.iter_mut().enumerate() {
                if let Some(z) = m.iter().find(|b| b[i] != g[i]) {
                    *ci = z[i] + 1;
                }
            }
            self.emit(N3Case::AlphaTwo, IDENTITY, offset, vec![(c, g)]);
            return;
        }

        if m.len() == 1 {
            // alpha(b) = 1: put the agreeing coordinate first, then the larger
            // of the other two
            let b = m[0];
            let agree = (0..3).find(|&i| b[i] == g[i]).expect("alpha 1");
            let (x, y) = others(agree);
            let perm = if b[x] >= b[y] { [agree, x, y] } else { [agree, y, x] };
            let (pb, pg) = (permute(b, perm), permute(g, perm));
            let i1 = ([0, pb[1] + 1, 0], [pg[0], pg[1], pb[2]]);
            let i2 = ([0, 0, pb[2] + 1], pg);
            self.emit(N3Case::SingleAlphaOne, perm, offset, vec![i1, i2]);
            return;
        }

        if let Some(&b) = m.iter().find(|b| alpha(b) == 2) {
            let free = (0..3).find(|&i| b[i] != g[i]).expect("alpha 2");
            let (x, y) = others(free);
            let perm = [x, y, free];
            self.emit(N3Case::PeelAlphaTwo, perm, offset, Vec::new());
            let cut = permute(b, perm)[2] + 1;
            self.recurse_above(g, &m, perm, cut, offset);
            return;
        }

        // alpha(M) = 1 and every element has alpha 1
        let gamma = |b: &P3| (0..3).filter(|&i| b[i] != g[i]).map(|i| b[i]).max().expect("alpha 1");
        let b0 = *m.iter().max_by_key(|b| (gamma(b), std::cmp::Reverse(**b))).expect("nonempty");
        let agree = (0..3).find(|&i| b0[i] == g[i]).expect("alpha 1");
        let (x, y) = others(agree);
        let perm = if b0[x] == gamma(&b0) { [agree, x, y] } else { [agree, y, x] };
        let pg = permute(g, perm);
        let pm: Vec<P3> = m.iter().map(|&b| permute(b, perm)).collect();
        let pb0 = permute(b0, perm);
        let c1 = pm.iter().filter(|b| b[0] != pg[0] && b[1] == pg[1]).map(|b| b[0] + 1).max().unwrap_or(0);
        let c2 = pb0[1] + 1;
        let c3 = pm.iter().map(|b| b[2]).min().expect("nonempty");
        self.emit(N3Case::SplitJ, perm, offset, vec![([c1, c2, 0], [pg[0], pg[1], c3])]);
        self.recurse_above(g, &m, perm, c3 + 1, offset);
    }

    /// Recurses on the slab of points whose canonical third coordinate is at
    /// least `cut`.
    fn recurse_above(&mut self, g: P3, m: &[P3], perm: [usize; 3], cut: u32, offset: P3) {
        let pg = permute(g, perm);
        if cut > pg[2] {
            return;
        }
        let shift = unpermute([0, 0, cut], perm);
        let sub_g = unpermute([pg[0], pg[1], pg[2] - cut], perm);
        let sub_m: Vec<P3> = m
            .iter()
            .filter(|&&b| le(shift, b))
            .map(|b| [b[0] - shift[0], b[1] - shift[1], b[2] - shift[2]])
            .collect();
        self.construct(sub_g, sub_m, add(offset, shift));
    }
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}
