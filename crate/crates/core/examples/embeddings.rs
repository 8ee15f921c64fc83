//! Full embeddings of a configuration into a target, and the maximum common
//! subtree fallback when the shape does not fit.

use msr_plan::centrality::spot_values;
use msr_plan::iso::{is_valid_embedding, EmbeddingSearch, IsoParams};
use msr_plan::model::{ConfigId, Configuration, ModuleId, TargetConfiguration};

fn configuration(edges: &[(u32, u32)]) -> Configuration {
    let n = edges.len() as u32 + 1;
    Configuration {
        id: ConfigId(0),
        members: (0..n).map(ModuleId).collect(),
        edges: edges.iter().map(|&(a, b)| (ModuleId(a), ModuleId(b))).collect(),
        leader: ModuleId(0),
    }
}

fn main() {
    let points: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, 0.0)).collect();
    let path6 = TargetConfiguration::from_edges(&points, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
    let values = spot_values(&path6).unwrap();

    let path3 = configuration(&[(0, 1), (1, 2)]);
    let search = EmbeddingSearch::new(&path3, &path6, &values);
    let full = search.full(IsoParams::unbounded());
    println!("3-path into 6-path: {} full embeddings", full.len());
    for e in full.iter().take(4) {
        assert!(is_valid_embedding(e, &path3, &path6));
        println!("  {:?}", e.mapping);
    }

    let star = configuration(&[(0, 1), (0, 2), (0, 3)]);
    let search = EmbeddingSearch::new(&star, &path6, &values);
    println!("star into 6-path: {} full embeddings", search.full(IsoParams::default()).len());
    let mcs = search.mcs(IsoParams::default()).unwrap();
    println!("largest common subtree has {} modules, {} embeddings", search.common_size(), mcs.len());
    println!("  first: {:?} ({:?})", mcs[0].mapping, mcs[0].kind);

    let restricted = EmbeddingSearch::new(&path3, &path6, &values)
        .restrict_to(|s| s.0 >= 3)
        .full(IsoParams::unbounded());
    println!("3-path into spots 3..5 only: {} embeddings", restricted.len());
}
