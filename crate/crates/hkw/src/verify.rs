//! Invariant suites run by `hkw verify`.

use crate::cube::Cube;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::filtered;
use crate::jones;
use crate::local::Locals;
use crate::mf::{random_assembly, MarkRemoval};
use crate::moves::{self, MoveScalars, R11};
use crate::potential::Potential;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Run every check that applies to the diagram; each passing check yields one line.
pub fn run(d: &Diagram, pot: &Potential, cap: usize) -> Result<Vec<String>> {
    let loc = Locals::new(pot);
    let mut out = vec![];
    let cube = Cube::build(d, &loc, cap)?;
    cube.check_faces()?;
    out.push("ok faces commute".to_string());
    cube.check_edge_degrees()?;
    out.push("ok edge maps have filtered degree 0".to_string());
    let cx = cube.complex();
    cx.check_d2()?;
    out.push("ok d^2 = 0".to_string());
    if pot.n == 2 {
        let e = cx.euler();
        let p = jones::p2(d)?;
        if e != p {
            return Err(Error::Invariant(format!(
                "Euler characteristic {} differs from P_2 {}",
                jones::render(&e),
                jones::render(&p)
            )));
        }
        out.push(format!("ok Euler characteristic = P_2 = {}", jones::render(&p)));
    }
    let h = filtered::homology(d, &loc, cap)?;
    out.push(format!("ok total dimension {} = n^{}", h.total, h.components));
    out.extend(local_suite(pot, 50, 0)?);
    Ok(out)
}

/// Mark removal on `count` random open graphs; returns the number of probe identities checked.
pub fn mark_removal(pot: &Potential, count: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = 0;
    for i in 0..count {
        let (q, x, y) = random_assembly(pot, &mut rng, 3);
        let mr = MarkRemoval::new(pot, &q, x, y)?;
        probes += mr.verify(2)?;
        if !mr.k.respects_degree(&mr.reduced, &mr.n) {
            return Err(Error::Invariant(format!(
                "mark removal: K has the wrong degree on assembly {i}"
            )));
        }
    }
    Ok(probes)
}

/// Checks that depend only on the potential: local maps, mark removal and the move audits.
pub fn local_suite(pot: &Potential, assemblies: usize, seed: u64) -> Result<Vec<String>> {
    let loc = Locals::new(pot);
    let mut out = vec![];
    if !loc.chi_identities() {
        return Err(Error::Invariant("chi maps fail their identities".into()));
    }
    out.push("ok chi0, chi1 are chain maps and chi1 chi0 = chi0 chi1 = x3 - x2".to_string());
    let probes = mark_removal(pot, assemblies, seed)?;
    out.push(format!(
        "ok mark removal on {assemblies} random assemblies ({probes} probes)"
    ));
    let sc = MoveScalars::new(&loc)?;
    let m = &sc.morse;
    let render = |xs: Vec<String>| xs.join(", ");
    out.push(format!(
        "ok merge q_a q_b -> c q_a: {}",
        render(m.merge.iter().map(|((a, b), c)| format!("({a},{b}) {c}")).collect())
    ));
    out.push(format!(
        "ok split q_a -> c q_a q_a: {}",
        render(m.split.iter().map(|(a, c)| format!("{a} {c}")).collect())
    ));
    out.push(format!(
        "ok Morse degrees: unit {}, counit {}, saddle {}",
        m.unit_degree, m.counit_degree, m.saddle_degree
    ));
    R11::new(pot)?.verify()?;
    out.push(format!(
        "ok R1.1 maps and homotopy; birth scalars {}",
        render(sc.birth.iter().map(|c| c.to_string()).collect())
    ));
    if !moves::r21_b_is_identity(pot)? {
        return Err(Error::Invariant("R2.1 b-matrix is not the identity".into()));
    }
    out.push("ok R2.1 b-matrix is the identity".to_string());
    out.push(format!(
        "ok R2.1 chi1 chi0 scalars: {}",
        render(sc.r21.iter().map(|((a, b), c)| format!("({a},{b}) {c}")).collect())
    ));
    let (s0, s1) = moves::eta_sign_lemma(&loc)?;
    out.push(format!("ok eta sign lemma: eta0 ~ {s0} alt0, eta1 ~ {s1} alt1"));
    Ok(out)
}
