//! Experiment orchestration: success-rate sweeps over sparsity, convergence
//! traces, and their CSV forms.

mod csv_io;
mod sweep;

pub use csv_io::{
    read_sweep_csv, read_trace_csv, render_sweep_csv, render_trace_csv, write_sweep_csv,
    write_trace_csv, SWEEP_COLUMNS, TRACE_COLUMNS,
};
pub use sweep::{
    run_convergence_trace, run_success_rate_sweep, run_trial, SweepResult, SweepRow, SweepSpec,
    TrialOutcome,
};
