//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on failure.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_cover, field, random_hyperplane_cover};
use subcover::cover::{
    is_cover, is_irredundant, lines_cover_plane, private_points, prune_to_irredundant,
    pullback_cover, thmb_witness, CoverFamily, CoverKind,
};
use subcover::linalg::Matrix;
use subcover::solver::{self, build_instance, min_set_cover};
use subcover::subspace::{
    count_hyperplanes, enumerate_affine_hyperplanes, enumerate_hyperplanes, intersect_affine,
    LinearSubspace,
};
use subcover::{Elem, FieldSpec, Vector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const FIELDS_D2: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];
const GRID_TIME_LIMIT: Duration = Duration::from_secs(60);

fn grid() -> Vec<(u64, usize)> {
    let mut g: Vec<(u64, usize)> = FIELDS_D2.iter().map(|&q| (q, 2)).collect();
    g.extend([2, 3, 4, 5].map(|q| (q, 3)));
    g.extend([2, 3].map(|q| (q, 4)));
    g
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main_theorem_grid() -> Outcome {
    let start = Instant::now();
    let g = grid();
    for &(q, d) in &g {
        let f = field(q);
        let lc = solver::lc(&f, d).map_err(|e| e.to_string())?;
        let ilc = solver::ilc(&f, d).map_err(|e| e.to_string())?;
        ensure(lc.optimum == f.order() + 1, || format!("LC(F_{q}^{d}) = {}", lc.optimum))?;
        ensure(ilc.optimum == f.order() + 1, || format!("ILC(F_{q}^{d}) = {}", ilc.optimum))?;
        ensure(lc.exhaustive && is_cover(&lc.witness).unwrap_or(false), || format!("bad witness at F_{q}^{d}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < GRID_TIME_LIMIT, || format!("grid took {elapsed:?}"))?;
    Ok(format!("{} cells, LC = ILC = q + 1, {:.2?}", g.len(), elapsed))
}

fn affine_grid() -> Outcome {
    let mut g = grid();
    g.extend(FIELDS_D2.iter().map(|&q| (q, 1)));
    for &(q, d) in &g {
        let f = field(q);
        let ac = solver::ac(&f, d).map_err(|e| e.to_string())?;
        let iac = solver::iac(&f, d).map_err(|e| e.to_string())?;
        ensure(ac.optimum == f.order(), || format!("AC(F_{q}^{d}) = {}", ac.optimum))?;
        ensure(iac.optimum == f.order(), || format!("IAC(F_{q}^{d}) = {}", iac.optimum))?;
    }
    Ok(format!("{} cells, AC = IAC = q", g.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut checked = Vec::new();
    for q in FIELDS_D2 {
        let f = field(q);
        for d in 1..=4 {
            for kind in [CoverKind::Linear, CoverKind::Affine] {
                let Ok(inst) = build_instance(&f, d, kind) else { continue };
                if inst.num_candidates() > 20 {
                    continue;
                }
                let sol = min_set_cover(&inst).map_err(|e| e.to_string())?;
                let (opt, combo) = brute_force_cover(inst.num_points(), &inst.incidence)
                    .ok_or_else(|| format!("oracle found no cover for F_{q}^{d} {kind}"))?;
                ensure(sol.optimum == opt && sol.chosen == combo, || {
                    format!("F_{q}^{d} {kind}: solver {:?}/{}, oracle {combo:?}/{opt}", sol.chosen, sol.optimum)
                })?;
                checked.push(format!("{kind} F_{q}^{d}"));
            }
        }
    }
    // the instances named in the criterion must be among those checked
    for required in ["linear F_2^2", "linear F_3^2", "linear F_4^2", "affine F_2^1", "affine F_2^2", "affine F_3^1", "affine F_3^2"] {
        ensure(checked.iter().any(|c| c == required), || format!("{required} not checked"))?;
    }
    Ok(format!("{} instances match brute force", checked.len()))
}

fn plane_lines_needed() -> Outcome {
    for q in FIELDS_D2 {
        let f = field(q);
        let lines = lines_cover_plane(&f);
        ensure(lines.len() == f.order() + 1, || format!("F_{q}: {} lines", lines.len()))?;
        for i in 0..lines.len() {
            let private = private_points(&lines, i).map_err(|e| e.to_string())?;
            ensure(private.iter().any(|p| !p.is_zero()), || format!("F_{q}: line {i} has no private point"))?;
            // every other proper subspace of F^2 is a line or zero
            let mut others: Vec<LinearSubspace> =
                lines.members().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| m.direction().clone()).collect();
            others.push(LinearSubspace::zero(&f, 2));
            let rest = CoverFamily::linear(&f, 2, others).map_err(|e| e.to_string())?;
            ensure(!is_cover(&rest).unwrap(), || format!("F_{q}: covered without line {i}"))?;
        }
    }
    Ok("every line of F_q^2 has a private point for q in {2,3,4,5,7,8,9}".into())
}

fn coordinate_surjection(rng: &mut ChaCha8Rng, f: &FieldSpec, d: usize) -> Matrix {
    let mut coords: Vec<usize> = (0..d).collect();
    coords.shuffle(rng);
    let rows: Vec<Vector> = coords[..2].iter().map(|&c| Vector::unit(d, c)).collect();
    Matrix::from_rows(f, d, &rows).unwrap()
}

fn pullback_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut irredundant = 0;
    for trial in 0..100 {
        let q = [2u64, 3, 4][trial % 3];
        let f = field(q);
        let lines = lines_cover_plane(&f);
        let mut members: Vec<LinearSubspace> = lines.members().iter().map(|m| m.direction().clone()).collect();
        for _ in 0..rng.gen_range(0..3) {
            members.push(members[rng.gen_range(0..lines.len())].clone());
        }
        if rng.gen_bool(0.2) {
            members.push(LinearSubspace::zero(&f, 2));
        }
        members.shuffle(&mut rng);
        let fam = CoverFamily::linear(&f, 2, members).unwrap();
        let map = coordinate_surjection(&mut rng, &f, 4);
        let up = pullback_cover(&fam, &map).map_err(|e| e.to_string())?;
        let (c0, c1) = (is_cover(&fam).unwrap(), is_cover(&up).unwrap());
        ensure(c0 && c1, || format!("trial {trial}: cover {c0} -> {c1}"))?;
        let (i0, i1) = (is_irredundant(&fam).unwrap(), is_irredundant(&up).unwrap());
        ensure(i0 == i1, || format!("trial {trial}: irredundant {i0} -> {i1}"))?;
        irredundant += i0 as usize;

        // a non-cover stays a non-cover
        let drop = rng.gen_range(0..lines.len());
        let keep: Vec<usize> = (0..lines.len()).filter(|&j| j != drop).collect();
        let partial = pullback_cover(&lines.subfamily(&keep), &map).map_err(|e| e.to_string())?;
        ensure(!is_cover(&partial).unwrap(), || format!("trial {trial}: non-cover became a cover"))?;
    }
    Ok(format!("100 pullbacks to F_q^4 preserve cover/irredundancy ({irredundant} irredundant)"))
}

fn line_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut witnesses = 0;
    for trial in 0..100 {
        let q = [2u64, 3, 4, 5][rng.gen_range(0..4)];
        let d = rng.gen_range(2..=3);
        let f = field(q);
        let fam = random_hyperplane_cover(&mut rng, &f, d, 6);
        let pruned = prune_to_irredundant(&fam).map_err(|e| e.to_string())?;
        ensure(is_irredundant(&pruned).unwrap(), || format!("trial {trial}: pruned family redundant"))?;
        for i in 0..pruned.len() {
            let w = thmb_witness(&pruned, i).map_err(|e| format!("trial {trial}, member {i}: {e}"))?;
            ensure(w.hits[i] == 0, || format!("trial {trial}: hits[{i}] = {}", w.hits[i]))?;
            ensure(w.hits.iter().all(|&h| h <= 1), || format!("trial {trial}: a member meets the line twice"))?;
            ensure(w.others_hit() >= f.order(), || format!("trial {trial}: only {} others hit", w.others_hit()))?;
            ensure(pruned.len() > f.order(), || format!("trial {trial}: {} members", pruned.len()))?;
            witnesses += 1;
        }
    }
    Ok(format!("{witnesses} witnesses over 100 pruned covers"))
}

fn hyperplane_counts() -> Outcome {
    for (q, d) in grid() {
        let f = field(q);
        let n = enumerate_hyperplanes(&f, d).len();
        let qs = f.order();
        ensure(n == (qs.pow(d as u32) - 1) / (qs - 1), || format!("F_{q}^{d}: {n} hyperplanes"))?;
        ensure(n == count_hyperplanes(qs, d), || format!("F_{q}^{d}: count mismatch"))?;
        ensure(n > qs, || format!("F_{q}^{d}: fewer than q + 1"))?;
    }
    Ok("hyperplane counts match (q^d - 1)/(q - 1) >= q + 1".into())
}

fn field_axioms() -> Outcome {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        let f = field(q);
        let els: Vec<Elem> = f.elements().collect();
        let (zero, one) = (Elem::ZERO, Elem::ONE);
        for &a in &els {
            ensure(f.add(a, zero) == a && f.mul(a, one) == a, || format!("F_{q}: identities fail at {a}"))?;
            ensure(f.add(a, f.neg(a)) == zero, || format!("F_{q}: negation fails at {a}"))?;
            if a != zero {
                ensure(f.mul(a, f.inv(a).unwrap()) == one, || format!("F_{q}: inverse fails at {a}"))?;
                ensure(f.pow(a, q - 1) == one, || format!("F_{q}: {a}^(q-1) != 1"))?;
            }
            for &b in &els {
                ensure(f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a), || format!("F_{q}: commutativity"))?;
                for &c in &els {
                    ensure(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), || format!("F_{q}: additive associativity"))?;
                    ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || format!("F_{q}: multiplicative associativity"))?;
                    ensure(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), || format!("F_{q}: distributivity"))?;
                }
            }
        }
    }
    Ok("exhaustive axioms for q in {2,3,4,5,7,8,9,16}".into())
}

fn affine_intersections() -> Outcome {
    let f = field(3);
    let hyps = enumerate_affine_hyperplanes(&f, 3);
    let (mut empty, mut lines) = (0, 0);
    for (i, a) in hyps.iter().enumerate() {
        for b in &hyps[i + 1..] {
            match intersect_affine(a, b).map_err(|e| e.to_string())? {
                None => {
                    ensure(a.direction() == b.direction(), || "non-parallel hyperplanes missed".into())?;
                    empty += 1;
                }
                Some(x) => {
                    ensure(x.dim() == 1, || format!("intersection of dimension {}", x.dim()))?;
                    ensure(a.dim() - x.dim() == 1 && b.dim() - x.dim() == 1, || "not codimension one".into())?;
                    lines += 1;
                }
            }
        }
    }
    Ok(format!("{} affine planes of F_3^3: {empty} empty, {lines} line intersections", hyps.len()))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_subcover"))
            .args(["verify-main-theorem", "--field", "4", "--dmax", "3", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "verify-main-theorem failed".into())?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("two runs byte-identical ({} bytes)", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 LC/ILC grid", main_theorem_grid),
        ("2 AC/IAC grid", affine_grid),
        ("3 oracle equivalence", oracle_equivalence),
        ("4 plane lines all needed", plane_lines_needed),
        ("5 pullback preservation", pullback_preservation),
        ("6 line witnesses", line_witnesses),
        ("7 hyperplane counts", hyperplane_counts),
        ("8 field axioms", field_axioms),
        ("9 affine intersections", affine_intersections),
        ("10 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", 10 - failed, 10);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
