#![no_main]

use afembed::graph::parse_graph;
use libfuzzer_sys::fuzz_target;

const GRAPH: &str = "vertex v\nvertex w\nedge e v v\nedge g w v\nedge h v w\n";

fuzz_target!(|data: &[u8]| {
    let Ok(label) = std::str::from_utf8(data) else {
        return;
    };
    if label.len() > 1024 {
        return;
    }
    let g = parse_graph(GRAPH).unwrap();
    if let Ok(p) = g.parse_path(label) {
        // labels of parsed paths parse back to the same path
        assert_eq!(g.parse_path(&p.label(&g)).unwrap(), p);
    }
});
