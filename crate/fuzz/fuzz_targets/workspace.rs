#![no_main]

use libfuzzer_sys::fuzz_target;
use sullivan::text::Workspace;

// parse(print(ws)) == ws for every accepted input
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ws) = Workspace::parse(text) {
        let printed = ws.print();
        let again = Workspace::parse(&printed).expect("printed workspace parses");
        assert!(again == ws);
        assert_eq!(again.print(), printed);
    }
});
