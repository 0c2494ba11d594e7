#![no_main]

use libfuzzer_sys::fuzz_target;
use sullivan::text::parse_polynomial;
use sullivan::Model;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let m = Model::builder("F")
        .gen("x", 2)
        .gen("e", 3)
        .gen("y", 3)
        .gen("u", 4)
        .d("y", "x^2")
        .build()
        .unwrap();
    if let Ok(p) = parse_polynomial(m.algebra(), text) {
        let again = parse_polynomial(m.algebra(), &m.format(&p)).expect("formatted text parses");
        assert_eq!(again, p);
    }
});
