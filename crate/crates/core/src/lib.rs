//! Retrieval and grounded answering over public-consultation feedback.

pub mod answer;
pub mod config;
pub mod embedding;
pub mod index;
pub mod ingest;
pub mod pipeline;
pub mod service;
