//! Random instances. Everything exact is built so that the ground truth
//! (eigenvalues, Jordan structure, closed forms) is known by construction.

use drazin_core::linalg::JordanPresentation;
use drazin_core::operator::{Block, Component, ComponentKind, DiagonalBlock, OperatorDesc, ShiftBlock, Weights};
use drazin_core::sequence::Sequence;
use drazin_core::spectra::Multiplicity;
use drazin_core::{ApproxMatrix, Complex64, ExactMatrix, GaussRat, Matrix, MatrixBlock, Polynomial};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::GeneratorProfile;

fn pick(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    WeightedIndex::new(weights).expect("validated weights").sample(rng)
}

pub fn rational(rng: &mut ChaCha8Rng, pool: i64) -> GaussRat {
    GaussRat::ratio(rng.random_range(-pool..=pool), rng.random_range(1..=pool))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng, pool: i64) -> GaussRat {
    loop {
        let r = rational(rng, pool);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A Gaussian rational, complex with probability `p_complex`.
pub fn gauss(rng: &mut ChaCha8Rng, pool: i64, p_complex: f64) -> GaussRat {
    let re = rational(rng, pool);
    if rng.random_bool(p_complex) {
        &re + &(&rational(rng, pool) * &GaussRat::i())
    } else {
        re
    }
}

fn nonzero_gauss(rng: &mut ChaCha8Rng, pool: i64, p_complex: f64) -> GaussRat {
    loop {
        let g = gauss(rng, pool, p_complex);
        if !g.is_zero() {
            return g;
        }
    }
}

fn positive_rational(rng: &mut ChaCha8Rng, pool: i64) -> GaussRat {
    GaussRat::ratio(rng.random_range(1..=pool), rng.random_range(1..=pool))
}

/// `0 < |q| < 1`.
fn contraction(rng: &mut ChaCha8Rng, pool: i64, p_complex: f64) -> GaussRat {
    let den = rng.random_range(2..=pool.max(2));
    loop {
        let re = GaussRat::ratio(rng.random_range(-den + 1..den), den);
        let im = if rng.random_bool(p_complex) {
            GaussRat::ratio(rng.random_range(-den + 1..den), den)
        } else {
            GaussRat::zero()
        };
        let q = &re + &(&im * &GaussRat::i());
        if !q.is_zero() && q.norm_sqr() < BigRational::one() {
            return q;
        }
    }
}

/// Determinant ±1: a permuted product of unit triangular factors with
/// entries in `{0, ±1}` (and `±i` when `complex`).
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize, complex: bool) -> ExactMatrix {
    let entry = |rng: &mut ChaCha8Rng| -> GaussRat {
        let k = rng.random_range(0..if complex { 5 } else { 3 });
        match k {
            0 => GaussRat::zero(),
            1 => GaussRat::int(1),
            2 => GaussRat::int(-1),
            3 => GaussRat::i(),
            _ => -GaussRat::i(),
        }
    };
    let mut l = ExactMatrix::identity(n);
    let mut u = ExactMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = entry(rng);
            u[(j, i)] = entry(rng);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = Matrix::from_fn(n, n, |i, j| if perm[i] == j { GaussRat::one() } else { GaussRat::zero() });
    p.matmul(&l).matmul(&u)
}

/// Random Jordan data of total size `n` with a unimodular similarity.
/// Zero is an eigenvalue with probability one half.
pub fn presented(rng: &mut ChaCha8Rng, p: &GeneratorProfile, n: usize, p_complex: f64) -> JordanPresentation {
    let mut sizes = Vec::new();
    let mut rest = n;
    while rest > 0 {
        let s = if rng.random_bool(0.3) { rng.random_range(1..=rest) } else { rng.random_range(1..=rest.min(2)) };
        sizes.push(s);
        rest -= s;
    }
    let k = rng.random_range(1..=sizes.len());
    let mut eig: Vec<GaussRat> = Vec::new();
    if rng.random_bool(0.5) {
        eig.push(GaussRat::zero());
    }
    while eig.len() < k {
        let l = gauss(rng, p.value_pool.min(4), p_complex);
        if !eig.contains(&l) {
            eig.push(l);
        }
    }
    let mut data: Vec<(GaussRat, Vec<usize>)> = Vec::new();
    for (i, s) in sizes.into_iter().enumerate() {
        let l = if i < k { eig[i].clone() } else { eig[rng.random_range(0..k)].clone() };
        match data.iter_mut().find(|(m, _)| *m == l) {
            Some((_, b)) => b.push(s),
            None => data.push((l, vec![s])),
        }
    }
    let complex = rng.random_bool(p_complex);
    let sim = unimodular(rng, n, complex);
    JordanPresentation::new(data, Some(sim)).expect("valid by construction")
}

/// Floating point matrices: converted presentations (nontrivial index),
/// dense random ones, and dense ones with a forced kernel.
pub fn approx_matrix(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> ApproxMatrix {
    let n = rng.random_range(1..=p.max_matrix_dim);
    let u = |rng: &mut ChaCha8Rng| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    match rng.random_range(0..3) {
        0 => presented(rng, p, n, 0.3).to_matrix().map(<Complex64 as drazin_core::Scalar>::from_gauss),
        1 => Matrix::from_fn(n, n, |_, _| u(rng)),
        _ => {
            let b = Matrix::from_fn(n, n, |_, _| u(rng));
            let keep: Vec<Complex64> = (0..n)
                .map(|i| if i + 1 == n || rng.random_bool(0.2) { Complex64::new(0.0, 0.0) } else { Complex64::new(1.0, 0.0) })
                .collect();
            b.matmul(&Matrix::diagonal(&keep)).matmul(&b.inverse().unwrap_or_else(|_| Matrix::identity(n)))
        }
    }
}

/// Component kinds in the order of [`crate::FamilyMix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Points,
    Geometric,
    Harmonic,
    Segment,
}

const KINDS: [Kind; 4] = [Kind::Points, Kind::Geometric, Kind::Harmonic, Kind::Segment];

pub fn component(rng: &mut ChaCha8Rng, p: &GeneratorProfile, kind: Kind) -> Component {
    let pool = p.value_pool;
    let limit = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            GaussRat::zero()
        } else {
            gauss(rng, pool.min(3), 0.2)
        }
    };
    let c = match kind {
        Kind::Points => {
            let m = if rng.random_bool(0.5) {
                Multiplicity::Infinite
            } else {
                Multiplicity::Finite(rng.random_range(1..=3))
            };
            let v = if rng.random_bool(0.3) { GaussRat::zero() } else { gauss(rng, pool, 0.2) };
            Component::constant(v, m).expect("positive multiplicity")
        }
        Kind::Geometric => {
            let s = Sequence::geometric(nonzero_gauss(rng, pool, 0.2), contraction(rng, pool, 0.2)).expect("valid");
            Component::family(s.add_const(&limit(rng)))
        }
        Kind::Harmonic => {
            let s = Sequence::harmonic(nonzero_gauss(rng, pool, 0.2), rng.random_range(1..=2)).expect("valid");
            Component::family(s.add_const(&limit(rng)))
        }
        Kind::Segment => {
            let lo = rational(rng, pool);
            let hi = &lo + &positive_rational(rng, pool);
            Component::dense(lo.re(), hi.re()).expect("lo < hi")
        }
    };
    with_overrides(rng, p, c)
}

fn with_overrides(rng: &mut ChaCha8Rng, p: &GeneratorProfile, mut c: Component) -> Component {
    if rng.random_bool(0.2) {
        let cap = match c.len() {
            Multiplicity::Finite(k) => k,
            Multiplicity::Infinite => 6,
        };
        let i = rng.random_range(0..cap);
        c = c.with_override(i, gauss(rng, p.value_pool, 0.2)).expect("index in range");
    }
    c
}

pub fn diagonal(rng: &mut ChaCha8Rng, p: &GeneratorProfile, force_segment: bool) -> DiagonalBlock {
    let n = rng.random_range(1..=3);
    let mix = p.family_mix.weights();
    let mut kinds: Vec<Kind> = (0..n).map(|_| KINDS[pick(rng, &mix)]).collect();
    if force_segment && !kinds.contains(&Kind::Segment) {
        kinds.push(Kind::Segment);
    }
    DiagonalBlock::new(kinds.into_iter().map(|k| component(rng, p, k)).collect()).expect("nonempty")
}

fn weights(rng: &mut ChaCha8Rng, p: &GeneratorProfile, nilpotent: bool) -> Weights {
    let pool = p.value_pool.min(5);
    match rng.random_range(0..if nilpotent { 3 } else { 2 }) {
        0 => Weights::Geometric(positive_rational(rng, pool), GaussRat::ratio(1, rng.random_range(2..=pool.max(2)))),
        1 => Weights::Harmonic(positive_rational(rng, pool), rng.random_range(1..=2)),
        _ => Weights::List((0..rng.random_range(1..=3)).map(|_| positive_rational(rng, pool)).collect()),
    }
}

/// Shift base (no transform).
pub fn base_shift(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> ShiftBlock {
    let nil = rng.random_bool(0.5).then(|| rng.random_range(1..=4));
    let s = ShiftBlock::new(weights(rng, p, nil.is_some()), nil).expect("valid weights");
    if rng.random_bool(0.3) {
        s.adjoint()
    } else {
        s
    }
}

/// A polynomial `μ + a₁x + a₂x²` in the shift.
pub fn shift_transform(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> Polynomial<GaussRat> {
    let pool = p.value_pool.min(4);
    let mu = if rng.random_bool(0.5) { GaussRat::zero() } else { gauss(rng, pool, 0.2) };
    match rng.random_range(0..4) {
        0 => Polynomial::x(),
        1 => Polynomial::new(vec![mu, nonzero_gauss(rng, pool, 0.2)]),
        2 => Polynomial::new(vec![mu, GaussRat::zero(), nonzero_gauss(rng, pool, 0.2)]),
        _ => Polynomial::new(vec![mu, gauss(rng, pool, 0.2), nonzero_gauss(rng, pool, 0.2)]),
    }
}

pub fn shift(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> ShiftBlock {
    let s = base_shift(rng, p);
    let t = shift_transform(rng, p);
    s.map(&t)
}

/// Block kinds in the order of [`crate::BlockMix`].
pub fn block(rng: &mut ChaCha8Rng, p: &GeneratorProfile, force_segment: bool) -> Block {
    if force_segment {
        return Block::Diagonal(diagonal(rng, p, true));
    }
    match pick(rng, &p.block_mix.weights()) {
        0 => {
            let n = rng.random_range(1..=p.max_matrix_dim);
            Block::Matrix(MatrixBlock::Presented(presented(rng, p, n, 0.2)))
        }
        1 => Block::Diagonal(diagonal(rng, p, false)),
        _ => Block::Shift(shift(rng, p)),
    }
}

/// A direct sum of up to `max_blocks` random blocks, occasionally wrapped
/// in an adjoint or a scalar shift.
pub fn operator(rng: &mut ChaCha8Rng, p: &GeneratorProfile, force_segment: bool) -> OperatorDesc {
    let n = rng.random_range(1..=p.max_blocks);
    let forced = if force_segment { rng.random_range(0..n) } else { n };
    let blocks: Vec<Block> = (0..n).map(|i| block(rng, p, i == forced)).collect();
    // dense ranges only survive real shifts
    let dense = blocks.iter().any(|b| {
        matches!(b, Block::Diagonal(d) if d.components().iter().any(|c| matches!(c.kind(), ComponentKind::Dense(_))))
    });
    let parts: Vec<OperatorDesc> = blocks.into_iter().map(OperatorDesc::Block).collect();
    let op = if parts.len() == 1 {
        parts.into_iter().next().expect("one")
    } else {
        OperatorDesc::dsum(parts)
    };
    match rng.random_range(0..10) {
        0 => OperatorDesc::adjoint(op),
        1 => OperatorDesc::shift_by(op, gauss(rng, p.value_pool.min(3), if dense { 0.0 } else { 0.2 })),
        _ => op,
    }
}

/// An upper triangular matrix with diagonal from a small pool (zero
/// often) and arbitrary rational entries above it.
fn upper(rng: &mut ChaCha8Rng, n: usize, pool: i64) -> ExactMatrix {
    Matrix::from_fn(n, n, |i, j| {
        if i > j {
            GaussRat::zero()
        } else if i == j {
            if rng.random_bool(0.35) {
                GaussRat::zero()
            } else {
                gauss(rng, pool.min(3), 0.2)
            }
        } else if rng.random_bool(0.6) {
            gauss(rng, pool.min(3), 0.0)
        } else {
            GaussRat::zero()
        }
    })
}

fn pair_component(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> (Component, Component) {
    let pool = p.value_pool;
    let konst = |rng: &mut ChaCha8Rng, p_complex: f64| {
        let v = if rng.random_bool(0.3) { GaussRat::zero() } else { gauss(rng, pool, p_complex) };
        Component::constant(v, Multiplicity::Infinite).expect("valid")
    };
    let (a, b) = match rng.random_range(0..6) {
        0 => {
            let m = if rng.random_bool(0.5) { Multiplicity::Infinite } else { Multiplicity::Finite(rng.random_range(1..=3)) };
            let u = if rng.random_bool(0.3) { GaussRat::zero() } else { gauss(rng, pool, 0.2) };
            let v = if rng.random_bool(0.3) { GaussRat::zero() } else { gauss(rng, pool, 0.2) };
            (Component::constant(u, m).expect("valid"), Component::constant(v, m).expect("valid"))
        }
        1 => {
            let k = if rng.random_bool(0.5) { Kind::Geometric } else { Kind::Harmonic };
            (konst(rng, 0.2), component(rng, p, k))
        }
        2 => (component(rng, p, Kind::Geometric), component(rng, p, Kind::Geometric)),
        3 => (component(rng, p, Kind::Harmonic), component(rng, p, Kind::Harmonic)),
        // dense ranges only stay real under real factors
        4 => (component(rng, p, Kind::Segment), konst(rng, 0.0)),
        _ => (component(rng, p, Kind::Segment), component(rng, p, Kind::Segment)),
    };
    if rng.random_bool(0.5) {
        (a, b)
    } else {
        (b, a)
    }
}

/// `(a, b)` such that `ab` and `ba` are both representable.
///
/// Matrix blocks are `a = S T₁ R⁻¹`, `b = R T₂ S⁻¹` with triangular `Tᵢ`
/// and unimodular `S, R`, so `ab ~ T₁T₂` and `ba ~ T₂T₁` have exact
/// eigenvalues but generally different Jordan structure at 0.
pub fn pair(rng: &mut ChaCha8Rng, p: &GeneratorProfile) -> (OperatorDesc, OperatorDesc) {
    let n = rng.random_range(1..=p.max_blocks);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        let (x, y) = match rng.random_range(0..3) {
            0 => {
                let d = rng.random_range(1..=p.max_matrix_dim);
                let (cs, cr) = (rng.random_bool(0.2), rng.random_bool(0.2));
                let s = unimodular(rng, d, cs);
                let r = unimodular(rng, d, cr);
                let (si, ri) = (s.inverse().expect("unimodular"), r.inverse().expect("unimodular"));
                let (t1, t2) = (upper(rng, d, p.value_pool), upper(rng, d, p.value_pool));
                (
                    Block::Matrix(MatrixBlock::Exact(s.matmul(&t1).matmul(&ri))),
                    Block::Matrix(MatrixBlock::Exact(r.matmul(&t2).matmul(&si))),
                )
            }
            1 => {
                let k = rng.random_range(1..=3);
                let (xs, ys): (Vec<Component>, Vec<Component>) = (0..k).map(|_| pair_component(rng, p)).unzip();
                (
                    Block::Diagonal(DiagonalBlock::new(xs).expect("nonempty")),
                    Block::Diagonal(DiagonalBlock::new(ys).expect("nonempty")),
                )
            }
            _ => {
                let s = base_shift(rng, p);
                (Block::Shift(s.map(&shift_transform(rng, p))), Block::Shift(s.map(&shift_transform(rng, p))))
            }
        };
        a.push(OperatorDesc::Block(x));
        b.push(OperatorDesc::Block(y));
    }
    let wrap = |v: Vec<OperatorDesc>| if v.len() == 1 { v.into_iter().next().expect("one") } else { OperatorDesc::dsum(v) };
    (wrap(a), wrap(b))
}

/// A perturbation commuting with `op` block by block, with a finite-rank
/// power: polynomials in matrix blocks, finitely supported diagonals of
/// the same index structure, polynomials in truncated shifts.
pub fn commuting_finite_rank(rng: &mut ChaCha8Rng, p: &GeneratorProfile, op: &OperatorDesc) -> OperatorDesc {
    let blocks = op.blocks().expect("generated operators evaluate");
    let parts = blocks
        .iter()
        .map(|b| {
            let f = match b {
                Block::Matrix(m) => {
                    let q = Polynomial::new((0..rng.random_range(1..=3)).map(|_| rational(rng, 3)).collect());
                    let x = m.to_exact().expect("exact");
                    Block::Matrix(MatrixBlock::Exact(q.eval_matrix(&x)))
                }
                Block::Diagonal(d) => {
                    let comps = d
                        .components()
                        .iter()
                        .map(|c| {
                            let zero = Component::constant(GaussRat::zero(), c.len()).expect("valid");
                            let cap = match c.len() {
                                Multiplicity::Finite(k) => k,
                                Multiplicity::Infinite => 6,
                            };
                            if rng.random_bool(0.6) {
                                let i = rng.random_range(0..cap);
                                zero.with_override(i, gauss(rng, p.value_pool, 0.2)).expect("in range")
                            } else {
                                zero
                            }
                        })
                        .collect();
                    Block::Diagonal(DiagonalBlock::new(comps).expect("nonempty"))
                }
                Block::Shift(s) => {
                    let q = if s.nilpotent().is_some() { shift_transform(rng, p) } else { Polynomial::zero() };
                    let base = ShiftBlock::new(s.weights().clone(), s.nilpotent()).expect("valid");
                    let base = if s.is_adjoint() { base.adjoint() } else { base };
                    Block::Shift(base.map(&q))
                }
            };
            OperatorDesc::Block(f)
        })
        .collect::<Vec<_>>();
    if parts.len() == 1 {
        parts.into_iter().next().expect("one")
    } else {
        OperatorDesc::dsum(parts)
    }
}

/// A non-constant polynomial of degree ≤ 3. With `real_rational_extremes`
/// it is real with rational critical points, so images of segments stay
/// exact.
pub fn test_polynomial(rng: &mut ChaCha8Rng, real_rational_extremes: bool) -> Polynomial<GaussRat> {
    if real_rational_extremes {
        let c = rational(rng, 3);
        let k = nonzero_rational(rng, 3);
        match rng.random_range(1..=3) {
            1 => Polynomial::new(vec![c, k]),
            2 => {
                // k (x - r)² + c
                let r = rational(rng, 3);
                Polynomial::linear_root(&r).pow(2).scale(&k).add(&Polynomial::constant(c))
            }
            _ => {
                // derivative k (x - r₁)(x - r₂)
                let (r1, r2) = (rational(rng, 3), rational(rng, 3));
                let s = &r1 + &r2;
                let pr = &r1 * &r2;
                let cubic = Polynomial::new(vec![
                    GaussRat::zero(),
                    pr,
                    -(&s * &GaussRat::ratio(1, 2)),
                    GaussRat::ratio(1, 3),
                ]);
                cubic.scale(&k).add(&Polynomial::constant(c))
            }
        }
    } else {
        let d = rng.random_range(1..=3);
        let mut coeffs: Vec<GaussRat> = (0..d).map(|_| gauss(rng, 3, 0.3)).collect();
        coeffs.push(nonzero_gauss(rng, 3, 0.3));
        Polynomial::new(coeffs)
    }
}

/// Hermitian `U D U*` with a Gaussian-rational unitary `U` from the Cayley
/// transform `(I - K)(I + K)⁻¹` of a skew-hermitian `K`.
pub fn hermitian(rng: &mut ChaCha8Rng, p: &GeneratorProfile, n: usize) -> JordanPresentation {
    let pool = p.value_pool.min(3);
    let mut k = ExactMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = &rational(rng, pool) * &GaussRat::i();
        for j in 0..i {
            let z = gauss(rng, pool, 0.5);
            k[(i, j)] = z.clone();
            k[(j, i)] = -z.conj();
        }
    }
    let id = ExactMatrix::identity(n);
    let u = id.sub(&k).matmul(&id.add(&k).inverse().expect("I + K is invertible for skew-hermitian K"));
    let mut data: Vec<(GaussRat, Vec<usize>)> = Vec::new();
    for _ in 0..n {
        let l = if rng.random_bool(0.3) { GaussRat::zero() } else { rational(rng, pool) };
        match data.iter_mut().find(|(m, _)| *m == l) {
            Some((_, b)) => b.push(1),
            None => data.push((l, vec![1])),
        }
    }
    JordanPresentation::new(data, Some(u)).expect("unitary similarity")
}
