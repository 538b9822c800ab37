//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_weyl::arch::{assemble, check_domination, ArchBlocks};
use torus_weyl::gallery::{gallery, permutation_torus, run_gallery};
use torus_weyl::linalg::IntMatrix;
use torus_weyl::local::{ConductorVector, LocalData, LocalFactors};
use torus_weyl::matroid::{b_infinity, b_infinity_oracle, LinearMatroid};
use torus_weyl::orbit::{GTilde, OrbitAnalysis};
use torus_weyl::schema::{build, CoweightEntry, SpecDocument};
use torus_weyl::torus::{Limits, SubMultiset, Torus, TorusSpec};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn example(i: usize) -> Torus {
    build(gallery()[i].spec.clone(), Limits::default()).expect("gallery spec loads").torus
}

fn signed_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rows = vec![vec![0i64; n]; n];
    for j in 0..n {
        rows[perm[j]][j] = if rng.gen_bool(0.3) { -1 } else { 1 };
    }
    rows
}

/// Generators for a random finite subgroup of `GL_n(Z)`: signed
/// permutations, hexagonal rotations in rank 2, or a permutation action on
/// the root lattice of `A_n`.
fn random_generators(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Vec<i64>>> {
    let count = rng.gen_range(0..=2);
    match rng.gen_range(0..4) {
        0 if n == 2 => {
            let hex = [vec![vec![1, -1], vec![1, 0]], vec![vec![0, -1], vec![1, -1]], vec![vec![0, 1], vec![1, 0]]];
            (0..count).map(|_| hex.choose(rng).unwrap().clone()).collect()
        }
        1 => {
            let perms: Vec<Vec<usize>> = (0..count)
                .map(|_| {
                    let mut p: Vec<usize> = (0..=n).collect();
                    p.shuffle(rng);
                    p
                })
                .collect();
            permutation_torus(n + 1, &perms).generators
        }
        _ => (0..count).map(|_| signed_permutation(rng, n)).collect(),
    }
}

/// A random faithful torus with `n ≤ 4`, `m ≤ 8`, `|G| ≤ 24` and coweight
/// entries bounded by `entry`.
fn random_torus(rng: &mut ChaCha8Rng, entry: i64) -> Torus {
    loop {
        let n = rng.gen_range(1..=4);
        let generators = random_generators(rng, n);
        let limits = Limits { group_cap: 24, ..Limits::default() };
        let mats = generators.iter().map(|g| IntMatrix::from_rows(n, g)).collect();
        let Ok(spec) = TorusSpec::new(n, mats, limits.group_cap) else { continue };
        let mut coweights: Vec<CoweightEntry> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-entry..=entry)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let mult = rng.gen_range(1..=2);
            let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            for e in spec.elements() {
                let w: Vec<i64> = e.matrix.apply(&big).iter().map(|x| x.to_i64().unwrap()).collect();
                if !coweights.iter().any(|c| c.vector == w) {
                    coweights.push(CoweightEntry { vector: w, multiplicity: mult });
                }
            }
        }
        if coweights.iter().map(|c| c.multiplicity).sum::<u64>() > 8 {
            continue;
        }
        let doc = SpecDocument { dim: n, generators, coweights, gtilde: None, archimedean: None };
        if let Ok(loaded) = build(doc, limits) {
            if loaded.torus.is_faithful() && loaded.torus.spec().order() <= 24 {
                return loaded.torus;
            }
        }
    }
}

fn gallery_criterion() -> Outcome {
    let rows = run_gallery(&gallery());
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.name, r.detail)).collect();
    let mut detail = format!("{}/{} examples", rows.len() - failed.len(), rows.len());
    if !failed.is_empty() {
        detail = format!("{detail}; {}", failed.join("; "));
    }
    outcome(failed.is_empty(), detail)
}

fn a_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0C0);
    let two = BigRational::from_integer(2.into());
    for i in 0..500 {
        let t = random_torus(&mut rng, 2);
        let (a, _) = match t.invariant_a() {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("case {i}: {e}")),
        };
        let m = t.coweights().total();
        let lower = BigRational::new(BigInt::from(t.dim() + 1), BigInt::from(m));
        if a < lower || a > two {
            return outcome(false, format!("case {i}: A = {a}, n = {}, m = {m}", t.dim()));
        }
    }
    outcome(true, "500 random faithful tori satisfy (n+1)/m <= A <= 2")
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    if rng.gen_bool(0.35) {
        return BigRational::zero();
    }
    BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into())
}

fn binf_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1F);
    let mut done = 0;
    while done < 200 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=7);
        let mut rows: Vec<Vec<BigRational>> =
            (0..m).map(|_| (0..n).map(|_| random_rational(&mut rng)).collect()).collect();
        // Parallel rows give non-uniform matroids more often.
        if m > 1 && rng.gen_bool(0.3) {
            let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
            let k = BigRational::from_integer(rng.gen_range(1i64..=3).into());
            rows[i] = rows[j].iter().map(|x| x * &k).collect();
        }
        let Ok(mat) = LinearMatroid::new(n, &rows) else { continue };
        if !mat.is_full_rank() {
            continue;
        }
        let (fast, _) = match b_infinity(&mat) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("b_infinity: {e}")),
        };
        let slow = match b_infinity_oracle(&mat) {
            Ok(x) => x,
            Err(e) => return outcome(false, format!("oracle: {e}")),
        };
        if fast != slow {
            return outcome(false, format!("{n}x{m}: {fast} vs oracle {slow}"));
        }
        done += 1;
    }
    outcome(true, "200 random full-rank matrices: b_infinity = oracle")
}

fn frobenius_closed(t: &Torus, fr: usize, mut mask: u64) -> u64 {
    loop {
        let next = mask | t.coweights().act_on_mask(fr, mask);
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

fn local_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10CA1);
    let mut done = 0;
    let mut attempts = 0;
    let (mut nontrivial_fr, mut with_torsion, mut positive_dim) = (0, 0, 0);
    while done < 300 {
        attempts += 1;
        if attempts > 100_000 {
            return outcome(false, format!("only {done} admissible cases found"));
        }
        let t = random_torus(&mut rng, 4);
        let lambda = t.lambda();
        let qs: Vec<u64> = PRIMES.iter().copied().filter(|&q| BigInt::from(q).gcd(&lambda).is_one()).collect();
        let Some(&q) = qs.choose(&mut rng) else { continue };
        let g = rng.gen_range(0..t.spec().order());
        let word = t.spec().elements()[g].word.clone();
        let local = match LocalData::new(&t, q, &word) {
            Ok(l) => l,
            Err(e) => return outcome(false, format!("local data: {e}")),
        };
        let lf = LocalFactors::new(&t, local);
        let mask = frobenius_closed(&t, g, rng.gen::<u64>() & t.coweights().full_mask());
        let d = t.diag_group_for_mask(mask);
        let torsion = d.quotient.group().torsion_order();
        let big_n = BigInt::from(q).pow(lf.local().f as u32) - 1u32;
        if torsion > BigInt::from(10_000) || &torsion * big_n.pow(d.dimension as u32) > BigInt::from(200_000) {
            continue;
        }
        let fast = lf.hom_count(&d);
        let slow = lf.hom_count_oracle(&d);
        match (fast, slow) {
            (Ok(a), Ok(b)) if a == b => {
                done += 1;
                nontrivial_fr += usize::from(lf.local().f > 1);
                with_torsion += usize::from(torsion > BigInt::one());
                positive_dim += usize::from(d.dimension > 0);
            }
            (a, b) => return outcome(false, format!("case {done}: hom_count {a:?} vs oracle {b:?}")),
        }
    }
    for (i, name) in [(0, "Example 1"), (2, "Example 3"), (3, "Example 4")] {
        let t = example(i);
        for q in [2u64, 5, 7, 11, 13, 25] {
            let Ok(local) = LocalData::new(&t, q, &[]) else { continue };
            let lf = LocalFactors::new(&t, local);
            for s in t.sigma_set().unwrap() {
                let d = t.diag_group(&s);
                let (quot, rem) = lf.hom_count(&d).unwrap().div_rem(&lf.free_part_order(&d).unwrap());
                if !rem.is_zero() || quot != lf.a_count(&s).unwrap() {
                    return outcome(false, format!("{name}, q = {q}, S = {s}: a_count disagrees with |Q|/|Q_f|"));
                }
            }
        }
    }
    outcome(true, format!(
        "300 random (D, q, Fr): hom_count = oracle (Fr != 1: {nontrivial_fr}, torsion > 1: {with_torsion}, dim > 0: {positive_dim}); a_count = |Q|/|Q_f| on Examples 1, 3, 4"
    ))
}

fn all_vectors(k: usize, top: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..=top).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn inclusion_exclusion() -> Outcome {
    let mut checked = 0;
    for (i, name) in [(0, "Example 1"), (2, "Example 3"), (3, "Example 4")] {
        let t = example(i);
        let k = t.coweights().distinct_count();
        for q in [5u64, 7, 11, 13] {
            let Ok(local) = LocalData::new(&t, q, &[]) else { continue };
            let lf = LocalFactors::new(&t, local);
            for c in all_vectors(k, 2) {
                let leq = lf.pi_leq(&ConductorVector::new(c.clone())).unwrap();
                let mut sum = BigInt::zero();
                for c2 in all_vectors(k, 2) {
                    if c2.iter().zip(&c).all(|(a, b)| a <= b) {
                        sum += lf.pi_eq(&ConductorVector::new(c2)).unwrap();
                    }
                }
                if sum != leq {
                    return outcome(false, format!("{name}, q = {q}, c = {c:?}: sum {sum} vs pi_leq {leq}"));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} conductor vectors on Examples 1, 3, 4"))
}

/// Tame characters `ψ` of `F_q^×` (cyclic of order `q − 1`) for which exactly
/// one of `ψ²`, `ψ³` is ramified.
fn character_count(q: u64) -> u64 {
    let order = q - 1;
    (0..order).filter(|&k| ((2 * k) % order == 0) != ((3 * k) % order == 0)).count() as u64
}

fn example3_spot_check() -> Outcome {
    let t = example(2);
    let single = |v: i64| {
        let i = t.coweights().distinct().iter().position(|w| w == &vec![BigInt::from(v)]).unwrap();
        let mut counts = vec![0; t.coweights().distinct_count()];
        counts[i] = 1;
        SubMultiset::new(counts)
    };
    for q in [7u64, 13, 19, 25, 31, 37, 43, 49] {
        let lf = LocalFactors::new(&t, LocalData::new(&t, q, &[]).unwrap());
        let coeff = lf.local_factor(1).unwrap().coefficients[&1].clone();
        let a = lf.a_count(&single(2)).unwrap() - 1 + lf.a_count(&single(3)).unwrap() - 1;
        let brute = BigInt::from(character_count(q));
        if coeff != brute || a != brute || brute != BigInt::from(3) {
            return outcome(false, format!("q = {q}: coefficient {coeff}, a-sum {a}, characters {brute}"));
        }
    }
    outcome(true, "q in {7, 13, 19, 25, 31, 37, 43, 49}: coefficient at e = 1 is 3")
}

fn action_law() -> Outcome {
    let mut pairs = 0usize;
    for i in 2..gallery().len() {
        let t = example(i);
        let gt = GTilde::build(&t, &t.lambda(), None).unwrap();
        let orbits = OrbitAnalysis::new(&t, gt.clone()).unwrap();
        let points = orbits.sigma_tilde0();
        let identity = (0usize, 1 % gt.lambda());
        for e in points {
            if orbits.act(identity, e).unwrap() != *e {
                return outcome(false, format!("{}: identity moves {e}", gallery()[i].name));
            }
        }
        for &g in gt.elements() {
            for &h in gt.elements() {
                let gh = gt.compose(&t, g, h);
                for e in points {
                    let lhs = orbits.act(gh, e).unwrap();
                    let rhs = orbits.act(g, &orbits.act(h, e).unwrap()).unwrap();
                    if lhs != rhs {
                        return outcome(false, format!("{}: {g:?}·{h:?} on {e}", gallery()[i].name));
                    }
                }
                pairs += 1;
            }
        }
        if orbits.burnside_count().unwrap() != orbits.orbit_count().unwrap() {
            return outcome(false, format!("{}: Burnside disagrees", gallery()[i].name));
        }
    }
    outcome(true, format!("{pairs} element pairs on Examples 3-5; Burnside agrees"))
}

fn random_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-2..=2)).collect()).collect()
}

fn domination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4C);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        if attempts > 200_000 {
            return outcome(false, format!("only {done} valid block sets found"));
        }
        let [n1, n2, n3, m1, m2, m3] = [0; 6].map(|_| rng.gen_range(0..=3usize));
        if n1 + n2 + n3 == 0 {
            continue;
        }
        let blocks = ArchBlocks {
            n1,
            n2,
            n3,
            m1,
            m2,
            m3,
            a1: random_block(&mut rng, m1, n1),
            a2: random_block(&mut rng, m2, n1),
            a3: random_block(&mut rng, m3, n1),
            c: random_block(&mut rng, m3, n2),
            b1: random_block(&mut rng, m1, n3),
            b2: random_block(&mut rng, m2, n3),
            b3: (0..m3).map(|_| (0..n3).map(|_| (rng.gen_range(-2..=2), rng.gen_range(-2..=2))).collect()).collect(),
        };
        let Ok(mats) = assemble(&blocks) else { continue };
        let full = |m: &IntMatrix| LinearMatroid::from_int(m).is_ok_and(|l| l.is_full_rank());
        if !full(&mats.m_re) || !full(&mats.m_prime) {
            continue;
        }
        match check_domination(&mats) {
            Ok(true) => done += 1,
            Ok(false) => return outcome(false, format!("not dominated: {blocks:?}")),
            Err(e) => return outcome(false, format!("{e}: {blocks:?}")),
        }
    }
    outcome(true, format!("100 random valid block sets ({attempts} draws)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("example gallery", gallery_criterion),
        ("bounds on A", a_bounds),
        ("B_inf oracle", binf_oracle),
        ("local oracle", local_oracle),
        ("inclusion-exclusion", inclusion_exclusion),
        ("Example 3 coefficient", example3_spot_check),
        ("group action", action_law),
        ("archimedean domination", domination),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.passed;
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} {name}: {} ({:.2} s)", i + 1, o.detail, start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
