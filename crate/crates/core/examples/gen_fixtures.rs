//! Regenerate the instance files under fixtures/.

use toric_ko::charmat::{CharMatrix, ToricInstance};
use toric_ko::{InstanceFile, SimplicialComplex};

fn cpn(n: usize) -> ToricInstance {
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

fn cp1_power(n: usize) -> ToricInstance {
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

fn main() {
    let dir = std::path::Path::new("fixtures");
    std::fs::create_dir_all(dir).unwrap();
    let mut instances: Vec<ToricInstance> = (1..=6).map(cpn).collect();
    instances.push(cp1_power(2));
    instances.push(cp1_power(3));
    for inst in &instances {
        let file = InstanceFile::from_instance(inst);
        let path = dir.join(format!("{}.json", inst.name()));
        std::fs::write(&path, file.to_json_pretty() + "\n").unwrap();
        println!("wrote {}", path.display());
    }
}
