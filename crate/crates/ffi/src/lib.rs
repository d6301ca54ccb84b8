//! C ABI over `dnacrack`.
//!
//! Every object crosses the boundary as an opaque pointer owned by the
//! caller and released with the matching `_free` function. Every fallible
//! call returns a [`DnacrackStatus`] and writes its result through an out
//! pointer, which is left untouched on failure. Byte buffers handed out by
//! the library are released with [`dnacrack_buffer_free`].

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use dnacrack::analysis::detect_structure_leak;
use dnacrack::attack::{equivalent_decrypt, recover_equivalent_key, AttackFailure, EquivalentKey};
use dnacrack::cipher::{decrypt, encrypt};
use dnacrack::keystream::SecretKey;
use dnacrack::ppm::{read_ppm, write_ppm};
use dnacrack::{Error, RgbImage};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnacrackStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    MalformedImage = 3,
    MalformedKey = 4,
    MalformedEquivalentKey = 5,
    GeometryMismatch = 6,
    AttackFailed = 7,
    Internal = 8,
}

/// Which step of the known-plaintext attack found no witness.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DnacrackAttackStage {
    None = 0,
    NoStep1Witness = 1,
    NoStep2Witness = 2,
    NoStep3Witness = 3,
    InconsistentPair = 4,
}

/// An RGB image.
pub struct DnacrackImage(RgbImage);

/// A secret key.
pub struct DnacrackKey(SecretKey);

/// An equivalent key recovered by the attack.
pub struct DnacrackEquivalentKey(EquivalentKey);

impl From<&Error> for DnacrackStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Ppm(_) | Error::EmptyImage | Error::LengthMismatch { .. } => {
                DnacrackStatus::MalformedImage
            }
            Error::KeyFile(_) | Error::InvalidParams(_) | Error::InvalidRule(_) => {
                DnacrackStatus::MalformedKey
            }
            Error::EquivalentKeyFile(_) => DnacrackStatus::MalformedEquivalentKey,
            Error::GeometryMismatch { .. } => DnacrackStatus::GeometryMismatch,
            Error::InvalidDigit(_) => DnacrackStatus::InvalidArgument,
            Error::KeystreamDegenerate { .. } | Error::Io(_) => DnacrackStatus::Internal,
        }
    }
}

impl From<AttackFailure> for DnacrackAttackStage {
    fn from(f: AttackFailure) -> Self {
        match f {
            AttackFailure::NoStep1Witness => DnacrackAttackStage::NoStep1Witness,
            AttackFailure::NoStep2Witness => DnacrackAttackStage::NoStep2Witness,
            AttackFailure::NoStep3Witness => DnacrackAttackStage::NoStep3Witness,
            AttackFailure::InconsistentPair { .. } => DnacrackAttackStage::InconsistentPair,
        }
    }
}

type Outcome = Result<(), DnacrackStatus>;

fn guard(f: impl FnOnce() -> Outcome) -> DnacrackStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DnacrackStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => DnacrackStatus::Internal,
    }
}

fn lift<T>(r: dnacrack::Result<T>) -> Result<T, DnacrackStatus> {
    r.map_err(|e| DnacrackStatus::from(&e))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, DnacrackStatus> {
    p.as_ref().ok_or(DnacrackStatus::NullPointer)
}

unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], DnacrackStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(DnacrackStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(DnacrackStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_buffer(out: *mut *mut u8, out_len: *mut usize, data: Vec<u8>) -> Outcome {
    if out.is_null() || out_len.is_null() {
        return Err(DnacrackStatus::NullPointer);
    }
    let boxed = data.into_boxed_slice();
    *out_len = boxed.len();
    *out = Box::into_raw(boxed) as *mut u8;
    Ok(())
}

unsafe fn drop_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Static, NUL-terminated description of `status`.
#[no_mangle]
pub extern "C" fn dnacrack_status_message(status: DnacrackStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DnacrackStatus::Ok => c"ok",
        DnacrackStatus::NullPointer => c"null pointer argument",
        DnacrackStatus::InvalidArgument => c"invalid argument",
        DnacrackStatus::MalformedImage => c"malformed image",
        DnacrackStatus::MalformedKey => c"malformed secret key",
        DnacrackStatus::MalformedEquivalentKey => c"malformed equivalent key",
        DnacrackStatus::GeometryMismatch => c"image geometry mismatch",
        DnacrackStatus::AttackFailed => c"attack found no witness",
        DnacrackStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Release a buffer returned by this library. Null is ignored.
///
/// # Safety
/// `data` and `len` must come from one earlier call of this library.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_buffer_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}

/// Build an image from `width * height * 3` interleaved RGB bytes.
///
/// # Safety
/// `rgb` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_new(
    width: usize,
    height: usize,
    rgb: *const u8,
    len: usize,
    out: *mut *mut DnacrackImage,
) -> DnacrackStatus {
    guard(|| {
        let data = bytes(rgb, len)?;
        let img = lift(RgbImage::from_interleaved(width, height, data))?;
        put(out, DnacrackImage(img))
    })
}

/// Parse a binary PPM (P6, maxval 255).
///
/// # Safety
/// `data` must point to `len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_from_ppm(
    data: *const u8,
    len: usize,
    out: *mut *mut DnacrackImage,
) -> DnacrackStatus {
    guard(|| {
        let img = lift(read_ppm(bytes(data, len)?))?;
        put(out, DnacrackImage(img))
    })
}

/// Serialize to a canonical PPM. Free the buffer with [`dnacrack_buffer_free`].
///
/// # Safety
/// `img` must be a live handle; `out` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_to_ppm(
    img: *const DnacrackImage,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> DnacrackStatus {
    guard(|| put_buffer(out, out_len, write_ppm(&get(img)?.0)))
}

/// Width in pixels, or 0 for a null handle.
///
/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_width(img: *const DnacrackImage) -> usize {
    img.as_ref().map_or(0, |i| i.0.width())
}

/// Height in pixels, or 0 for a null handle.
///
/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_height(img: *const DnacrackImage) -> usize {
    img.as_ref().map_or(0, |i| i.0.height())
}

/// Copy the interleaved RGB bytes into `buf`, which must hold exactly
/// `width * height * 3` bytes.
///
/// # Safety
/// `img` must be a live handle and `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_copy_rgb(
    img: *const DnacrackImage,
    buf: *mut u8,
    len: usize,
) -> DnacrackStatus {
    guard(|| {
        let data = get(img)?.0.to_interleaved();
        if buf.is_null() {
            return Err(DnacrackStatus::NullPointer);
        }
        if len != data.len() {
            return Err(DnacrackStatus::InvalidArgument);
        }
        slice::from_raw_parts_mut(buf, len).copy_from_slice(&data);
        Ok(())
    })
}

/// # Safety
/// `img` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_image_free(img: *mut DnacrackImage) {
    drop_handle(img)
}

/// Build a key from its six parameters.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_key_new(
    k1: u8,
    k2: u8,
    x0: f64,
    mu0: f64,
    x0p: f64,
    mu0p: f64,
    out: *mut *mut DnacrackKey,
) -> DnacrackStatus {
    guard(|| {
        let key = lift(SecretKey::new(k1, k2, (x0, mu0), (x0p, mu0p)))?;
        put(out, DnacrackKey(key))
    })
}

/// Parse the text of a key file.
///
/// # Safety
/// `text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_key_parse(
    text: *const c_char,
    out: *mut *mut DnacrackKey,
) -> DnacrackStatus {
    guard(|| {
        if text.is_null() {
            return Err(DnacrackStatus::NullPointer);
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| DnacrackStatus::MalformedKey)?;
        put(out, DnacrackKey(lift(SecretKey::from_key_file(s))?))
    })
}

/// # Safety
/// `key` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_key_free(key: *mut DnacrackKey) {
    drop_handle(key)
}

/// # Safety
/// `img` and `key` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_encrypt(
    img: *const DnacrackImage,
    key: *const DnacrackKey,
    out: *mut *mut DnacrackImage,
) -> DnacrackStatus {
    guard(|| {
        let c = lift(encrypt(&get(img)?.0, &get(key)?.0))?;
        put(out, DnacrackImage(c))
    })
}

/// # Safety
/// `img` and `key` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_decrypt(
    img: *const DnacrackImage,
    key: *const DnacrackKey,
    out: *mut *mut DnacrackImage,
) -> DnacrackStatus {
    guard(|| {
        let p = lift(decrypt(&get(img)?.0, &get(key)?.0))?;
        put(out, DnacrackImage(p))
    })
}

/// Recover an equivalent key from a plain/cipher pair.
///
/// Returns `ATTACK_FAILED` when a step has no witness and reports which one
/// through `stage` (if non-null). On success `stage` is set to `NONE`.
///
/// # Safety
/// `plain` and `cipher` must be live handles; `out` must be writable and
/// `stage` null or writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_attack(
    plain: *const DnacrackImage,
    cipher: *const DnacrackImage,
    out: *mut *mut DnacrackEquivalentKey,
    stage: *mut DnacrackAttackStage,
) -> DnacrackStatus {
    guard(|| {
        if out.is_null() {
            return Err(DnacrackStatus::NullPointer);
        }
        let report = lift(recover_equivalent_key(&get(plain)?.0, &get(cipher)?.0))?;
        let reached = report
            .failure
            .map_or(DnacrackAttackStage::None, DnacrackAttackStage::from);
        if let Some(s) = stage.as_mut() {
            *s = reached;
        }
        match report.recovered {
            Some(ek) => put(out, DnacrackEquivalentKey(ek)),
            None => Err(DnacrackStatus::AttackFailed),
        }
    })
}

/// # Safety
/// `ek` and `cipher` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_eqkey_decrypt(
    ek: *const DnacrackEquivalentKey,
    cipher: *const DnacrackImage,
    out: *mut *mut DnacrackImage,
) -> DnacrackStatus {
    guard(|| {
        let p = lift(equivalent_decrypt(&get(cipher)?.0, &get(ek)?.0))?;
        put(out, DnacrackImage(p))
    })
}

/// Serialize to the `EQK1` file format. Free the buffer with
/// [`dnacrack_buffer_free`].
///
/// # Safety
/// `ek` must be a live handle; `out` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_eqkey_to_bytes(
    ek: *const DnacrackEquivalentKey,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> DnacrackStatus {
    guard(|| put_buffer(out, out_len, get(ek)?.0.to_bytes()))
}

/// Parse the `EQK1` file format.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_eqkey_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut DnacrackEquivalentKey,
) -> DnacrackStatus {
    guard(|| {
        let ek = lift(EquivalentKey::from_bytes(bytes(data, len)?))?;
        put(out, DnacrackEquivalentKey(ek))
    })
}

/// The recovered `k1` (1..=8), or 0 for a null handle.
///
/// # Safety
/// `ek` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_eqkey_k1(ek: *const DnacrackEquivalentKey) -> u8 {
    ek.as_ref().map_or(0, |k| k.0.k1().index())
}

/// # Safety
/// `ek` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_eqkey_free(ek: *mut DnacrackEquivalentKey) {
    drop_handle(ek)
}

/// Ciphertext-only structure leak: writes 1 where the G and B digits of a
/// position are equal, else 0. `buf` must hold `width * height * 4` bytes.
///
/// # Safety
/// `cipher` must be a live handle and `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dnacrack_structure_leak(
    cipher: *const DnacrackImage,
    buf: *mut u8,
    len: usize,
) -> DnacrackStatus {
    guard(|| {
        let flags = detect_structure_leak(&get(cipher)?.0);
        if buf.is_null() {
            return Err(DnacrackStatus::NullPointer);
        }
        if len != flags.len() {
            return Err(DnacrackStatus::InvalidArgument);
        }
        let dst = slice::from_raw_parts_mut(buf, len);
        for (d, f) in dst.iter_mut().zip(flags) {
            *d = f as u8;
        }
        Ok(())
    })
}
