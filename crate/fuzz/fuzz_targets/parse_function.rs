#![no_main]

use afembed::dynamics::parse_function;
use afembed::graph::parse_graph;
use libfuzzer_sys::fuzz_target;

const GRAPH: &str = "vertex v\nvertex w\nedge e v v\nedge g w v\nedge h v w\n";

fuzz_target!(|data: &[u8]| {
    // first byte picks the depth, the rest is the function text
    let Some((&depth, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if text.len() > 1024 {
        return;
    }
    let g = parse_graph(GRAPH).unwrap();
    if let Ok(f) = parse_function(&g, (depth % 5) as usize, text) {
        assert_eq!(f.depth(), (depth % 5) as usize);
        let _ = f.sigma_star();
    }
});
