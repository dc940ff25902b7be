//! Embedding and extraction of message bits at one virtual bit-plane.
//!
//! A pixel carries a bit only when both settings of its plane bit give a
//! canonical, in-range representation. The rule depends only on the pair
//! `{v, v ± weight}`, so the cover pixel and the stego pixel always agree on
//! eligibility and the extractor skips exactly the pixels the embedder did.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::numeral::NumeralSystem;

/// Width of the big-endian bit-count header written in [`LengthMode::LengthPrefix`].
pub const LENGTH_PREFIX_BITS: u64 = 32;

/// How the extractor learns the message length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LengthMode {
    /// A 32-bit big-endian bit count travels ahead of the message.
    LengthPrefix,
    /// No header; the bit count is known out of band.
    ExplicitLength(u64),
}

/// Pixel visiting order. Only row-major from the top-left is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Traversal {
    #[default]
    RowMajor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedPlan {
    system: NumeralSystem,
    plane: usize,
    traversal: Traversal,
    length_mode: LengthMode,
}

impl EmbedPlan {
    pub fn new(system: NumeralSystem, plane: usize, length_mode: LengthMode) -> Result<Self> {
        if plane >= system.planes() {
            return Err(system.plane_error(plane));
        }
        Ok(EmbedPlan {
            system,
            plane,
            traversal: Traversal::RowMajor,
            length_mode,
        })
    }

    pub fn system(&self) -> &NumeralSystem {
        &self.system
    }

    pub fn plane(&self) -> usize {
        self.plane
    }

    pub fn traversal(&self) -> Traversal {
        self.traversal
    }

    pub fn length_mode(&self) -> LengthMode {
        self.length_mode
    }

    pub fn with_length_mode(&self, length_mode: LengthMode) -> Self {
        EmbedPlan {
            length_mode,
            ..self.clone()
        }
    }
}

/// Accounting for one embedding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EmbedReport {
    /// Bits written, including the length header.
    pub bits_embedded: u64,
    /// Pixels scanned up to and including the one carrying the last bit.
    pub pixels_visited: u64,
    /// Ineligible pixels among those visited.
    pub pixels_skipped: u64,
    /// Pixels whose value actually changed.
    pub pixels_changed: u64,
    /// Eligible pixels in the whole cover.
    pub capacity_at_plane: u64,
}

fn check_pixel(system: &NumeralSystem, plane: usize, pixel: u64) -> Result<()> {
    if plane >= system.planes() {
        return Err(system.plane_error(plane));
    }
    if pixel > system.max_value() {
        return Err(Error::Parameter(format!(
            "pixel {pixel} exceeds maximum {}",
            system.max_value()
        )));
    }
    Ok(())
}

/// Canonical representation of `pixel` if it may carry a bit at `plane`.
fn eligible_repr(system: &NumeralSystem, plane: usize, pixel: u64) -> Result<Option<Vec<bool>>> {
    check_pixel(system, plane, pixel)?;
    let repr = system.encode(pixel)?.bits;
    let mut other = repr.clone();
    other[plane] = !other[plane];
    Ok(system.is_canonical(&other)?.then_some(repr))
}

/// Whether `pixel` can carry a message bit at `plane`.
pub fn pixel_eligible(system: &NumeralSystem, plane: usize, pixel: u64) -> Result<bool> {
    Ok(eligible_repr(system, plane, pixel)?.is_some())
}

/// Writes `bit` into `pixel` at `plane`. Returns the new value and whether the pixel
/// carried the bit; ineligible pixels come back unchanged.
pub fn embed_bit(system: &NumeralSystem, plane: usize, pixel: u64, bit: bool) -> Result<(u64, bool)> {
    match eligible_repr(system, plane, pixel)? {
        Some(mut repr) => {
            repr[plane] = bit;
            Ok((system.decode(&repr)?, true))
        }
        None => Ok((pixel, false)),
    }
}

/// Reads the bit at `plane`, or `None` when the pixel is skipped.
pub fn extract_bit(system: &NumeralSystem, plane: usize, pixel: u64) -> Result<Option<bool>> {
    Ok(eligible_repr(system, plane, pixel)?.map(|repr| repr[plane]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Skip,
    Carry { bit: bool, partner: u8 },
}

/// Per-value lookup of eligibility, current plane bit and the value with that
/// bit flipped, for pixel values `0..=max_value`.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    slots: Vec<Slot>,
}

impl PlaneMap {
    pub fn new(system: &NumeralSystem, plane: usize) -> Result<Self> {
        if plane >= system.planes() {
            return Err(system.plane_error(plane));
        }
        if system.max_value() > u8::MAX as u64 {
            return Err(Error::Parameter(format!(
                "images hold at most 8-bit samples, system spans 0..={}",
                system.max_value()
            )));
        }
        let slots = (0..=system.max_value())
            .map(|v| {
                Ok(match eligible_repr(system, plane, v)? {
                    Some(repr) => {
                        let bit = repr[plane];
                        let w = system.weights()[plane];
                        let partner = if bit { v - w } else { v + w };
                        Slot::Carry {
                            bit,
                            partner: partner as u8,
                        }
                    }
                    None => Slot::Skip,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PlaneMap { slots })
    }

    pub fn is_eligible(&self, pixel: u8) -> bool {
        matches!(self.slots.get(pixel as usize), Some(Slot::Carry { .. }))
    }

    pub fn extract(&self, pixel: u8) -> Option<bool> {
        match self.slots.get(pixel as usize)? {
            Slot::Carry { bit, .. } => Some(*bit),
            Slot::Skip => None,
        }
    }

    /// New pixel value after writing `bit`, or `None` for a skipped pixel.
    pub fn embed(&self, pixel: u8, bit: bool) -> Option<u8> {
        match self.slots.get(pixel as usize)? {
            Slot::Carry { bit: cur, .. } if *cur == bit => Some(pixel),
            Slot::Carry { partner, .. } => Some(*partner),
            Slot::Skip => None,
        }
    }

    /// Number of pixel values in `0..=max_value` that are eligible.
    pub fn eligible_values(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s, Slot::Carry { .. })).count()
    }

    pub fn capacity(&self, image: &GrayImage) -> u64 {
        image.pixels().iter().filter(|&&p| self.is_eligible(p)).count() as u64
    }
}

fn check_image(image: &GrayImage, system: &NumeralSystem) -> Result<()> {
    if image.maxval() as u64 != system.max_value() {
        return Err(Error::Parameter(format!(
            "image maxval {} does not match {} system range 0..={}",
            image.maxval(),
            system.kind(),
            system.max_value()
        )));
    }
    Ok(())
}

/// Eligible pixels of `cover` at `plane`.
pub fn capacity(cover: &GrayImage, system: &NumeralSystem, plane: usize) -> Result<u64> {
    check_image(cover, system)?;
    Ok(PlaneMap::new(system, plane)?.capacity(cover))
}

/// Hides `message` in `cover`, consuming one eligible pixel per bit in scan order.
///
/// Fails without writing anything when the framed message does not fit.
pub fn embed_message(cover: &GrayImage, plan: &EmbedPlan, message: &[bool]) -> Result<(GrayImage, EmbedReport)> {
    check_image(cover, &plan.system)?;
    let map = PlaneMap::new(&plan.system, plan.plane)?;
    let capacity = map.capacity(cover);

    let len = message.len() as u64;
    let framed: Vec<bool> = match plan.length_mode {
        LengthMode::LengthPrefix => {
            let header = u32::try_from(len).map_err(|_| Error::Capacity {
                required: len + LENGTH_PREFIX_BITS,
                available: capacity,
            })?;
            let mut bits = u32_to_bits(header);
            bits.extend_from_slice(message);
            bits
        }
        LengthMode::ExplicitLength(n) => {
            if n != len {
                return Err(Error::Parameter(format!(
                    "plan declares {n} message bits but {len} were supplied"
                )));
            }
            message.to_vec()
        }
    };
    let required = framed.len() as u64;
    if required > capacity {
        return Err(Error::Capacity {
            required,
            available: capacity,
        });
    }

    let mut pixels = cover.pixels().to_vec();
    let mut report = EmbedReport {
        capacity_at_plane: capacity,
        ..EmbedReport::default()
    };
    let mut bits = framed.iter().copied();
    let mut next = bits.next();
    for px in pixels.iter_mut() {
        let Some(bit) = next else { break };
        report.pixels_visited += 1;
        match map.embed(*px, bit) {
            Some(v) => {
                if v != *px {
                    report.pixels_changed += 1;
                }
                *px = v;
                report.bits_embedded += 1;
                next = bits.next();
            }
            None => report.pixels_skipped += 1,
        }
    }
    debug_assert!(next.is_none());
    Ok((cover.with_pixels(pixels)?, report))
}

/// Recovers the bits written by [`embed_message`] under the same plan.
pub fn extract_message(stego: &GrayImage, plan: &EmbedPlan) -> Result<Vec<bool>> {
    check_image(stego, &plan.system)?;
    let map = PlaneMap::new(&plan.system, plan.plane)?;
    let mut stream = stego.pixels().iter().filter_map(|&p| map.extract(p));
    let available = map.capacity(stego);

    let declared = match plan.length_mode {
        LengthMode::LengthPrefix => {
            if available < LENGTH_PREFIX_BITS {
                return Err(Error::CorruptStream {
                    declared: LENGTH_PREFIX_BITS,
                    available,
                });
            }
            let header: Vec<bool> = stream.by_ref().take(LENGTH_PREFIX_BITS as usize).collect();
            let declared = bits_to_u32(&header) as u64;
            if declared > available - LENGTH_PREFIX_BITS {
                return Err(Error::CorruptStream {
                    declared,
                    available: available - LENGTH_PREFIX_BITS,
                });
            }
            declared
        }
        LengthMode::ExplicitLength(n) => {
            if n > available {
                return Err(Error::CorruptStream {
                    declared: n,
                    available,
                });
            }
            n
        }
    };
    Ok(stream.take(declared as usize).collect())
}

fn u32_to_bits(v: u32) -> Vec<bool> {
    (0..32).rev().map(|i| v >> i & 1 == 1).collect()
}

fn bits_to_u32(bits: &[bool]) -> u32 {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as u32)
}

/// Expands bytes into bits, most significant bit of each byte first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1 == 1))
        .collect()
}

/// Packs bits into bytes, most significant first; a short final byte is zero-padded.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b as u8) << (7 - i)))
        .collect()
}

/// Repeats `pattern` to exactly `len` bits.
pub fn fill_bits(pattern: &[bool], len: usize) -> Vec<bool> {
    if pattern.is_empty() {
        return vec![false; len];
    }
    pattern.iter().copied().cycle().take(len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{synthesize, Pattern};
    use crate::numeral::{parse_msb_bits, SystemKind};

    fn sys(kind: SystemKind) -> NumeralSystem {
        NumeralSystem::new(kind, 8).unwrap()
    }

    #[test]
    fn toy_natural_top_plane() {
        let toy = NumeralSystem::with_planes(SystemKind::Natural, 3).unwrap();
        // 6 = "111"; clearing plane 2 gives "011", which is not canonical
        assert!(!pixel_eligible(&toy, 2, 6).unwrap());
        assert!(!toy.is_canonical(&parse_msb_bits("011").unwrap()).unwrap());
        assert_eq!(embed_bit(&toy, 2, 6, false).unwrap(), (6, false));
        assert_eq!(extract_bit(&toy, 2, 6).unwrap(), None);
    }

    #[test]
    fn natural_plane_zero_eligible_count() {
        let nat = sys(SystemKind::Natural);
        let count = (0..=255).filter(|&v| pixel_eligible(&nat, 0, v).unwrap()).count();
        assert_eq!(count, NATURAL_K8_PLANE0_ELIGIBLE);
    }

    // brute-force count over all 256 values, computed independently of this crate
    const NATURAL_K8_PLANE0_ELIGIBLE: usize = 34;

    #[test]
    fn embed_bit_properties_exhaustive() {
        for kind in SystemKind::ALL {
            let s = sys(kind);
            for plane in 0..s.planes() {
                let w = s.weights()[plane];
                for px in 0..=255u64 {
                    let cur = s.encode(px).unwrap().bits[plane];
                    let elig = pixel_eligible(&s, plane, px).unwrap();
                    for bit in [false, true] {
                        let (new, embedded) = embed_bit(&s, plane, px, bit).unwrap();
                        assert_eq!(embedded, elig);
                        assert_eq!(pixel_eligible(&s, plane, new).unwrap(), elig, "{kind} p{plane} v{px}");
                        if elig {
                            assert_eq!(extract_bit(&s, plane, new).unwrap(), Some(bit));
                            let delta = new.abs_diff(px);
                            assert_eq!(delta, if bit == cur { 0 } else { w });
                        } else {
                            assert_eq!(new, px);
                            assert_eq!(extract_bit(&s, plane, px).unwrap(), None);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn plane_map_agrees_with_direct_rule() {
        for kind in SystemKind::ALL {
            let s = sys(kind);
            for plane in 0..s.planes() {
                let map = PlaneMap::new(&s, plane).unwrap();
                for px in 0..=255u8 {
                    assert_eq!(map.extract(px), extract_bit(&s, plane, px as u64).unwrap());
                    for bit in [false, true] {
                        let (v, ok) = embed_bit(&s, plane, px as u64, bit).unwrap();
                        assert_eq!(map.embed(px, bit), ok.then_some(v as u8));
                    }
                }
            }
        }
    }

    #[test]
    fn parameter_checks() {
        let nat = sys(SystemKind::Natural);
        assert!(pixel_eligible(&nat, 23, 0).is_err());
        assert!(pixel_eligible(&nat, 0, 256).is_err());
        assert!(EmbedPlan::new(nat.clone(), 23, LengthMode::LengthPrefix).is_err());
        let small = GrayImage::new(2, 2, 15, vec![0, 1, 2, 3]).unwrap();
        assert!(capacity(&small, &nat, 0).is_err());
        let nat4 = NumeralSystem::new(SystemKind::Natural, 4).unwrap();
        assert!(capacity(&small, &nat4, 0).is_ok());
    }

    #[test]
    fn empty_message_writes_only_header() {
        let cover = synthesize(Pattern::Gradient, 16, 16).unwrap();
        let plan = EmbedPlan::new(sys(SystemKind::Binary), 0, LengthMode::LengthPrefix).unwrap();
        let (stego, report) = embed_message(&cover, &plan, &[]).unwrap();
        assert_eq!(report.bits_embedded, 32);
        assert_eq!(report.pixels_visited, 32);
        assert_eq!(&stego.pixels()[32..], &cover.pixels()[32..]);
        assert!(extract_message(&stego, &plan).unwrap().is_empty());
    }

    #[test]
    fn explicit_length_must_match_message() {
        let cover = synthesize(Pattern::Gradient, 16, 16).unwrap();
        let plan = EmbedPlan::new(sys(SystemKind::Binary), 0, LengthMode::ExplicitLength(3)).unwrap();
        assert!(matches!(embed_message(&cover, &plan, &[true; 2]), Err(Error::Parameter(_))));
        let (stego, _) = embed_message(&cover, &plan, &[true, false, true]).unwrap();
        assert_eq!(extract_message(&stego, &plan).unwrap(), vec![true, false, true]);
        let too_long = plan.with_length_mode(LengthMode::ExplicitLength(257));
        assert_eq!(
            extract_message(&stego, &too_long),
            Err(Error::CorruptStream { declared: 257, available: 256 })
        );
    }

    #[test]
    fn constant_ineligible_cover_has_no_capacity() {
        let nat = sys(SystemKind::Natural);
        let bad = (0..=255u8).find(|&v| !pixel_eligible(&nat, 22, v as u64).unwrap()).unwrap();
        let cover = synthesize(Pattern::Constant(bad), 8, 8).unwrap();
        assert_eq!(capacity(&cover, &nat, 22).unwrap(), 0);
        let plan = EmbedPlan::new(nat, 22, LengthMode::LengthPrefix).unwrap();
        assert_eq!(
            embed_message(&cover, &plan, &[]),
            Err(Error::Capacity { required: 32, available: 0 })
        );
        assert!(matches!(extract_message(&cover, &plan), Err(Error::CorruptStream { .. })));
    }

    #[test]
    fn uniform_eligible_cover_has_full_capacity() {
        let bin = sys(SystemKind::Binary);
        let cover = synthesize(Pattern::Constant(77), 5, 7).unwrap();
        assert_eq!(capacity(&cover, &bin, 3).unwrap(), 35);
    }

    #[test]
    fn corrupt_header_detected() {
        // header all ones declares 2^32 - 1 bits
        let bin = sys(SystemKind::Binary);
        let cover = synthesize(Pattern::Constant(255), 8, 8).unwrap();
        let plan = EmbedPlan::new(bin, 0, LengthMode::LengthPrefix).unwrap();
        assert_eq!(
            extract_message(&cover, &plan),
            Err(Error::CorruptStream { declared: u32::MAX as u64, available: 32 })
        );
    }

    #[test]
    fn byte_bit_helpers() {
        assert_eq!(bytes_to_bits(&[0b1010_0001]), [true, false, true, false, false, false, false, true]);
        assert_eq!(bits_to_bytes(&bytes_to_bits(b"sandipan")), b"sandipan");
        assert_eq!(bits_to_bytes(&[true, true]), vec![0b1100_0000]);
        assert_eq!(fill_bits(&[true, false], 5), [true, false, true, false, true]);
        assert_eq!(fill_bits(&[], 2), [false, false]);
        assert_eq!(bits_to_u32(&u32_to_bits(0xdead_beef)), 0xdead_beef);
    }
}
