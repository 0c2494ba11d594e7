#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use sullivan::catalog;
use sullivan::text::Workspace;

static CATALOG: OnceLock<Workspace> = OnceLock::new();

// maps and homotopies that refer to catalog models
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut ws = CATALOG.get_or_init(catalog::workspace).clone();
    let before = ws.names().len();
    match ws.load(text) {
        Ok(()) => {
            for f in ws.maps() {
                assert!(f.check_dg().passed());
            }
        }
        Err(_) => assert_eq!(ws.names().len(), before),
    }
});
