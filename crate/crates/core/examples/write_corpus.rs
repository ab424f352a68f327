use masseykit::massey::Dga;
use masseykit::simplicial::{standard, SimplicialComplex};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "corpus".into());
    let complexes = [
        ("pt", SimplicialComplex::point()),
        ("s1", standard::circle()),
        ("s2", standard::sphere()),
        ("t2", standard::torus()),
        ("rp2", standard::projective_plane()),
    ];
    for (name, k) in complexes {
        std::fs::write(format!("{dir}/{name}.json"), serde_json::to_string_pretty(&k.to_json()).unwrap() + "\n").unwrap();
    }
    std::fs::write(format!("{dir}/heisenberg.json"), serde_json::to_string_pretty(&Dga::heisenberg().to_json()).unwrap() + "\n").unwrap();
}
