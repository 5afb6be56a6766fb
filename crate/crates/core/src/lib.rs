//! Decision procedures, uniform interpolant synthesis, and countermodel
//! construction for multi-agent epistemic logics with distributed knowledge.

pub mod formula;
pub mod interpolation;
pub mod multiset;
pub mod parse;
pub mod calculus;
pub mod prover;
pub mod semantics;
pub mod sequents;

pub use interpolation::{
    a_formula, a_formula_t, e_formula, post_interpolant, pre_interpolant, trace_to_json,
    verify_interpolant, ElimTarget, InterpolantReport, InterpolationError, InterpolationTrace,
    SideTestOutcome, TraceLine, TraceNode, VerifyError,
};
pub use formula::{AgentUniverse, Formula, FormulaKind, Group, SyntaxError, Vocabulary};
pub use multiset::{project, subformula_closure, FormulaMultiset, Projection};
pub use parse::{
    parse_formula, parse_formula_unchecked, parse_sequent, parse_sequent_unchecked,
    parse_tsequent, parse_tsequent_unchecked, ParseError,
};
pub use calculus::{
    check_proof, enumerate_backward_moves, formula_to_latex, goal_to_latex, proof_to_json,
    proof_to_latex, Goal, Logic, Move, Principal, ProofCheckError, ProofTree, RuleTag, Side,
};
pub use prover::{MemoTable, ProveError, Prover, SearchStats, Verdict, DEFAULT_BUDGET};
pub use semantics::{
    compile_formula, countermodel, enumerate_small_models, eval_compiled, for_each_frame,
    frame_is_canonical, frame_satisfies, model_check, model_to_dot, model_to_json, packed_frame,
    saturate, sequent_valid, CompiledFormula, CountermodelError, EnumerateError, FormulaBank,
    FrameClass, FrameView, ModelError, OwnedFrame, PseudoModel, SaturateError, SaturatedSequent,
    DEFAULT_MODEL_BUDGET,
};
pub use sequents::{boxed_count, measure_lt, Measure, Sequent, SequentError, TSequent};
