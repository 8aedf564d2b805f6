//! Instance constructors shared by the integration suites: the
//! projective-space family, products of lines, their wedges, and
//! randomly sampled valid instances on small polytopal spheres.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toric_ko::charmat::{validate, CharMatrix, ToricInstance, ValidationMode};
use toric_ko::SimplicialComplex;

/// Complex projective n-space: simplex boundary with the identity-block
/// matrix whose last column is all -1.
pub fn cpn(n: usize) -> ToricInstance {
    let k = SimplicialComplex::simplex_boundary(n + 1).unwrap();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            let mut row = vec![0i64; n + 1];
            row[r] = 1;
            row[n] = -1;
            row
        })
        .collect();
    let lambda = CharMatrix::new(n, n + 1, &rows).unwrap();
    ToricInstance::new(format!("cp{n}"), k, lambda).unwrap()
}

/// The n-fold product of projective lines: the cross-polytope boundary
/// with antipodal pairs (2i-1, 2i).
pub fn cp1_power(n: usize) -> ToricInstance {
    let s0 = SimplicialComplex::new(2, &[vec![1], vec![2]]).unwrap();
    let mut k = s0.clone();
    for _ in 1..n {
        k = k.join(&s0);
    }
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            let mut row = vec![0i64; 2 * n];
            row[2 * r] = 1;
            row[2 * r + 1] = -1;
            row
        })
        .collect();
    let lambda = CharMatrix::new(n, 2 * n, &rows).unwrap();
    ToricInstance::new(format!("cp1_pow{n}"), k, lambda).unwrap()
}

pub fn base_instances() -> Vec<ToricInstance> {
    let mut out: Vec<ToricInstance> = (1..=4).map(cpn).collect();
    out.extend((2..=4).map(cp1_power));
    out
}

/// The full oracle corpus: the bases, every single wedge, every double
/// wedge (unordered vertex pairs), and seeded random instances.
pub fn corpus() -> Vec<ToricInstance> {
    let mut out = Vec::new();
    for base in base_instances() {
        let m = base.complex().vertex_count();
        out.push(base.clone());
        for v in 1..=m {
            out.push(base.iterated_wedge(&[v]).unwrap());
        }
        for u in 1..=m {
            for v in u + 1..=m {
                out.push(base.iterated_wedge(&[u, v]).unwrap());
            }
        }
    }
    out.extend(random_instances(12, 0xA11CE));
    out
}

/// Rejection-sample valid characteristic matrices over random joins of
/// simplex boundaries (duals of products of simplices, hence polytopal).
pub fn random_instances(count: usize, seed: u64) -> Vec<ToricInstance> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut serial = 0usize;
    while out.len() < count {
        serial += 1;
        let k = random_sphere(&mut rng);
        let m = k.vertex_count();
        let n = (k.dim().unwrap() + 1) as usize;
        let first_face = k.maximal_faces().into_iter().next().unwrap();
        let mut accepted = None;
        for _ in 0..400 {
            let mut rows = vec![vec![0i64; m]; n];
            for (i, &v) in first_face.iter().enumerate() {
                rows[i][v - 1] = 1;
            }
            for c in 0..m {
                if first_face.contains(&(c + 1)) {
                    continue;
                }
                for row in rows.iter_mut() {
                    row[c] = rng.gen_range(-1..=1);
                }
            }
            let lambda = match CharMatrix::new(n, m, &rows) {
                Ok(l) => l,
                Err(_) => continue,
            };
            if validate(&k, &lambda, ValidationMode::Toric).is_valid() {
                accepted = Some(lambda);
                break;
            }
        }
        if let Some(lambda) = accepted {
            let name = format!("random{serial}_m{m}_n{n}");
            out.push(ToricInstance::new(name, k, lambda).unwrap());
        }
    }
    out
}

fn random_sphere(rng: &mut StdRng) -> SimplicialComplex {
    loop {
        let mut k: Option<SimplicialComplex> = None;
        let mut m = 0usize;
        loop {
            let size = rng.gen_range(2..=4usize); // ∂Δ^(size-1) on `size` vertices
            if m + size > 9 {
                break;
            }
            let factor = SimplicialComplex::simplex_boundary(size).unwrap();
            k = Some(match k {
                None => factor,
                Some(existing) => existing.join(&factor),
            });
            m += size;
            if rng.gen_bool(0.3) {
                break;
            }
        }
        if let Some(k) = k {
            if k.vertex_count() >= 3 {
                return k;
            }
        }
    }
}
