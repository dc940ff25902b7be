// Shared bodies for the fuzz targets; also replayed over the corpus by tests/fuzz_corpus.rs.

use vplane::numeral::parse_msb_bits;
use vplane::stego::{bits_to_bytes, bytes_to_bits};
use vplane::{
    embed_message, extract_message, read_pgm, write_pgm, EmbedPlan, GrayImage, LengthMode, NumeralSystem, SystemKind,
};

fn system_from(byte: u8) -> NumeralSystem {
    let kind = match byte % 6 {
        0 => SystemKind::Binary,
        1 => SystemKind::Natural,
        2 => SystemKind::Prime,
        p => SystemKind::Fibonacci(u32::from(p) - 2),
    };
    NumeralSystem::new(kind, 8).expect("8-bit systems build")
}

pub fn pgm(data: &[u8]) {
    if let Ok(img) = read_pgm(data) {
        let bytes = write_pgm(&img);
        let back = read_pgm(&bytes).expect("written PGM parses");
        assert_eq!(back, img);
        assert_eq!(write_pgm(&back), bytes);
    }
}

/// `[system, plane, mode, width, pixels...]`. Extraction from arbitrary pixels
/// must not panic; a message embedded into those pixels must come back intact.
pub fn extract(data: &[u8]) {
    let [sys, plane, mode, width, rest @ ..] = data else {
        return;
    };
    let system = system_from(*sys);
    let plane = usize::from(*plane) % (system.planes() + 2);
    let width = usize::from(*width).max(1);
    let height = rest.len() / width;
    let Ok(image) = GrayImage::from_pixels(width, height, rest[..width * height].to_vec()) else {
        return;
    };
    let length = if mode & 1 == 0 {
        LengthMode::LengthPrefix
    } else {
        LengthMode::ExplicitLength(u64::from(mode >> 1))
    };
    let Ok(plan) = EmbedPlan::new(system, plane, length) else {
        return;
    };
    let _ = extract_message(&image, &plan);

    let message = bytes_to_bits(&rest[..rest.len().min(8)]);
    let plan = match length {
        LengthMode::ExplicitLength(_) => plan.with_length_mode(LengthMode::ExplicitLength(message.len() as u64)),
        LengthMode::LengthPrefix => plan,
    };
    if let Ok((stego, _)) = embed_message(&image, &plan, &message) {
        let back = extract_message(&stego, &plan).expect("own stego extracts");
        assert_eq!(bits_to_bytes(&back), bits_to_bytes(&message));
    }
}

/// `[system, msb-bit-string...]`
pub fn numeral(data: &[u8]) {
    let [sys, rest @ ..] = data else {
        return;
    };
    let system = system_from(*sys);
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(bits) = parse_msb_bits(text) else {
        return;
    };
    let Ok(value) = system.decode(&bits) else {
        assert_ne!(bits.len(), system.planes());
        return;
    };
    let canonical = system.is_canonical(&bits).expect("length already checked");
    if value <= system.max_value() {
        let rep = system.encode(value).expect("in range");
        assert_eq!(rep.value, value);
        assert_eq!(canonical, rep.bits == bits);
    }
}

pub fn system_kind(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(kind) = text.parse::<SystemKind>() {
        assert_eq!(kind.to_string().parse::<SystemKind>(), Ok(kind));
        let _ = NumeralSystem::new(kind, 4);
    }
}
