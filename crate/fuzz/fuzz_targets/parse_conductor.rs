#![no_main]

use arf_core::format::parse_naturals;
use arf_core::ConductorVector;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(parts) = parse_naturals(s) {
        let joined: Vec<String> = parts.iter().map(u32::to_string).collect();
        assert_eq!(parse_naturals(&joined.join(",")).unwrap(), parts);
    }
    if let Ok(c) = s.parse::<ConductorVector>() {
        assert!(c.as_slice().iter().all(|&x| x >= 1));
        assert_eq!(c.to_string().parse::<ConductorVector>().unwrap(), c);
    }
});
