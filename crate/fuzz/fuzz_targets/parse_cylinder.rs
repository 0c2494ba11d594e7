#![no_main]

use libfuzzer_sys::fuzz_target;
use sullivan::text::parse_cylinder;
use sullivan::Model;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let m = Model::builder("F")
        .gen("x", 2)
        .gen("e", 3)
        .gen("y", 3)
        .d("y", "x^2")
        .build()
        .unwrap();
    if let Ok(c) = parse_cylinder(m.algebra(), text) {
        let again = parse_cylinder(m.algebra(), &c.format(m.algebra())).expect("formatted text parses");
        assert_eq!(again, c);
        // d is defined on anything that parsed
        let _ = c.d(&m);
    }
});
