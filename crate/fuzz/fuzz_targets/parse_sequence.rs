#![no_main]

use arf_core::MultiplicitySequence;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = s.parse::<MultiplicitySequence>() {
        let again: MultiplicitySequence = m.to_string().parse().unwrap();
        assert_eq!(again, m);
        let c = m.conductor();
        assert!(m.contains(c));
        assert!(c == 0 || !m.contains(c - 1));
    }
});
