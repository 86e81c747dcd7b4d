//! Closed-form regret bounds, the integer-program oracle behind the
//! gap-dependent bound, and monitors for the high-probability events used
//! in the analysis.

mod closed_form;
mod lp;
mod monitor;

pub use closed_form::{
    bound_corollary, bound_corollary_with_constant, bound_dep, bound_dep_with_constant,
    bound_doubling, bound_indep, gap_constant, report, BoundName, BoundReport,
};
pub use lp::{
    is_feasible, lp_bruteforce, lp_closed_form, lp_enumerate, LpInstance, OracleResult,
    MAX_ENUMERATION_POINTS, MAX_ORACLE_ARMS, MAX_ORACLE_CAP,
};
pub use monitor::{monitor_many, monitor_run, monitored_elim_run, EventLog, MonitorSummary};
