#![no_main]

use afembed::graph::parse_graph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 4096 {
        return;
    }
    // any accepted graph must survive a print/parse round trip
    if let Ok(g) = parse_graph(text) {
        let again = parse_graph(&g.to_text()).expect("printed graph parses");
        assert_eq!(g, again);
        let _ = g.structural_flags();
        let _ = g.cycle_has_entrance();
    }
});
