// View model: the server's PlayerView plus transient input state. The server
// is the only source of truth for progress; this module never grades
// anything, it only shapes what the player is about to send.

import type { PlayerView, StageTag, Submission } from "./types.js";

export type Screen =
  | "intro"
  | "question"
  | "explaining"
  | "conclusion"
  | "finished"
  | "error";

const SCREEN_BY_STAGE: Record<StageTag, Screen> = {
  intro: "intro",
  intro_quiz: "question",
  challenge: "question",
  explaining: "explaining",
  conclusion_question: "question",
  conclusion: "conclusion",
  finished: "finished",
};

export function screenFor(stage: StageTag): Screen {
  return SCREEN_BY_STAGE[stage] ?? "error";
}

export interface UiState {
  selectedOption: number | null;
  checkedOptions: Set<number>;
  textBuffer: string;
  codeBuffer: string | null;
  selectedUnits: Set<number>;
  pendingLeft: number | null;
  links: Map<number, number>;
  busy: boolean;
  banner: string | null;
  lastVerdict: "accepted" | "rejected" | null;
  lastFeedback: string[];
}

export function initialUiState(): UiState {
  return {
    selectedOption: null,
    checkedOptions: new Set(),
    textBuffer: "",
    codeBuffer: null,
    selectedUnits: new Set(),
    pendingLeft: null,
    links: new Map(),
    busy: false,
    banner: null,
    lastVerdict: null,
    lastFeedback: [],
  };
}

/** Clear input state for a fresh view; keeps the code buffer so a rejected
 * rewrite is not thrown away, and seeds it from the starter on first sight. */
export function resetInputs(view: PlayerView, ui: UiState): UiState {
  const next: UiState = {
    ...ui,
    selectedOption: null,
    checkedOptions: new Set(),
    textBuffer: "",
    selectedUnits: new Set(),
    pendingLeft: null,
    links: new Map(),
  };
  if (view.body?.type === "cec" && next.codeBuffer === null) {
    next.codeBuffer = view.body.starter_code ?? "";
  }
  return next;
}

// Action legality mirrors the server's stage machine; screens only offer
// what the stage accepts, so a 422 indicates a bug, not a user mistake.
export function canSubmit(stage: StageTag): boolean {
  return stage === "intro_quiz" || stage === "challenge" || stage === "conclusion_question";
}

export function canAck(stage: StageTag): boolean {
  return stage === "intro" || stage === "explaining" || stage === "conclusion";
}

export function canRequestHint(stage: StageTag): boolean {
  return stage === "challenge";
}

/** Build the wire submission from the current inputs, or explain what is
 * still missing. Indices are presented-space; the server remaps them. */
export function buildSubmission(view: PlayerView, ui: UiState): Submission | { missing: string } {
  const body = view.body;
  if (!body) return { missing: "nothing to submit on this screen" };
  switch (body.type) {
    case "scq":
      if (ui.selectedOption === null) return { missing: "select an answer first" };
      return { type: "scq", chosen_index: ui.selectedOption };
    case "mcq":
      if (ui.checkedOptions.size === 0) return { missing: "select at least one answer" };
      return { type: "mcq", chosen_indices: [...ui.checkedOptions].sort((a, b) => a - b) };
    case "teq":
      if (ui.textBuffer.trim() === "") return { missing: "type an answer first" };
      return { type: "teq", text: ui.textBuffer };
    case "csc":
      if (ui.selectedUnits.size === 0) return { missing: "select at least one line" };
      return { type: "csc", chosen_units: [...ui.selectedUnits].sort((a, b) => a - b) };
    case "cec":
      return { type: "cec", code: ui.codeBuffer ?? body.starter_code ?? "" };
    case "alr": {
      const total = body.left?.length ?? 0;
      if (ui.links.size < total) {
        return { missing: `link every item on the left (${ui.links.size}/${total})` };
      }
      const map: Record<string, number> = {};
      for (const [left, right] of ui.links) map[String(left)] = right;
      return { type: "alr", proposed_map: map };
    }
    default:
      return { missing: `unknown challenge type ${(body as { type: string }).type}` };
  }
}

export function toggleChecked(set: Set<number>, index: number): Set<number> {
  const next = new Set(set);
  if (next.has(index)) next.delete(index);
  else next.add(index);
  return next;
}

/** Left-then-right link building; relinking a left item replaces its link. */
export function clickLeft(ui: UiState, index: number): UiState {
  return { ...ui, pendingLeft: index };
}

export function clickRight(ui: UiState, index: number): UiState {
  if (ui.pendingLeft === null) return ui;
  const links = new Map(ui.links);
  links.set(ui.pendingLeft, index);
  return { ...ui, links, pendingLeft: null };
}

export function removeLink(ui: UiState, leftIndex: number): UiState {
  const links = new Map(ui.links);
  links.delete(leftIndex);
  return { ...ui, links };
}
