//! Canonical binary encoding of algorithm state (postcard: varint
//! integers, length-prefixed sequences). The byte length of an encoded
//! state is what the communication protocols charge.

use alloc::vec::Vec;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("state codec: {0}")]
pub struct CodecError(pub postcard::Error);

pub fn encode<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CodecError> {
    postcard::to_allocvec(value).map_err(CodecError)
}

pub fn decode<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, CodecError> {
    postcard::from_bytes(bytes).map_err(CodecError)
}
