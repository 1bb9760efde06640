//! Random corpora, mutants, the 3SAT encoder and the benchmark suite.

mod gen;
mod sat;
mod suite;

pub use gen::{
    gen_accepted, gen_interaction, gen_prefix, mutate_noise, mutate_swap_act, mutate_swap_comp,
    GenError, GenParams, SymbolWeights,
};
pub use sat::{encode_3sat, Cnf, SatError};
pub use suite::{
    bucket_medians, build_instances, length_bucket, median, read_csv, run_instance, run_suite,
    write_csv, Instance, Method, Mode, Row, SuiteConfig, TraceKind, BUCKETS,
};
