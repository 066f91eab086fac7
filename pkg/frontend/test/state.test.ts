import { describe, expect, it } from "vitest";

import {
  buildSubmission,
  canAck,
  canRequestHint,
  canSubmit,
  clickLeft,
  clickRight,
  initialUiState,
  removeLink,
  resetInputs,
  toggleChecked,
} from "../src/state.js";
import { alrView, cecView, cscView, mcqView, scqView, teqView } from "./fixtures.js";

describe("action legality mirrors the server stages", () => {
  it("submit only in the three question stages", () => {
    expect(canSubmit("intro_quiz")).toBe(true);
    expect(canSubmit("challenge")).toBe(true);
    expect(canSubmit("conclusion_question")).toBe(true);
    expect(canSubmit("intro")).toBe(false);
    expect(canSubmit("explaining")).toBe(false);
    expect(canSubmit("finished")).toBe(false);
  });

  it("ack only in pass-through stages", () => {
    expect(canAck("intro")).toBe(true);
    expect(canAck("explaining")).toBe(true);
    expect(canAck("conclusion")).toBe(true);
    expect(canAck("challenge")).toBe(false);
    expect(canAck("finished")).toBe(false);
  });

  it("hints only while on the main challenge", () => {
    expect(canRequestHint("challenge")).toBe(true);
    expect(canRequestHint("intro_quiz")).toBe(false);
    expect(canRequestHint("conclusion_question")).toBe(false);
  });
});

describe("buildSubmission", () => {
  it("scq needs a selection, then sends the presented index", () => {
    const ui = initialUiState();
    expect(buildSubmission(scqView, ui)).toHaveProperty("missing");
    ui.selectedOption = 2;
    expect(buildSubmission(scqView, ui)).toEqual({ type: "scq", chosen_index: 2 });
  });

  it("mcq sends the checked set sorted", () => {
    const ui = initialUiState();
    ui.checkedOptions = new Set([3, 1]);
    expect(buildSubmission(mcqView, ui)).toEqual({ type: "mcq", chosen_indices: [1, 3] });
  });

  it("teq sends the text buffer", () => {
    const ui = initialUiState();
    ui.textBuffer = " strncpy ";
    expect(buildSubmission(teqView, ui)).toEqual({ type: "teq", text: " strncpy " });
  });

  it("csc sends the selected unit indices", () => {
    const ui = initialUiState();
    ui.selectedUnits = new Set([1]);
    expect(buildSubmission(cscView, ui)).toEqual({ type: "csc", chosen_units: [1] });
  });

  it("cec falls back to the starter code until the player edits", () => {
    const ui = resetInputs(cecView, initialUiState());
    expect(buildSubmission(cecView, ui)).toEqual({
      type: "cec",
      code: "strcpy(tag, name); /* <-- fix me */",
    });
    ui.codeBuffer = "snprintf(tag, sizeof(tag), \"%s\", name);";
    expect(buildSubmission(cecView, ui)).toEqual({
      type: "cec",
      code: "snprintf(tag, sizeof(tag), \"%s\", name);",
    });
  });

  it("alr requires a total mapping before it will submit", () => {
    let ui = initialUiState();
    ui = clickLeft(ui, 0);
    ui = clickRight(ui, 1);
    const partial = buildSubmission(alrView, ui);
    expect(partial).toHaveProperty("missing");
    ui = clickLeft(ui, 1);
    ui = clickRight(ui, 0);
    expect(buildSubmission(alrView, ui)).toEqual({
      type: "alr",
      proposed_map: { "0": 1, "1": 0 },
    });
  });
});

describe("link building", () => {
  it("left then right creates a link and clears the pending mark", () => {
    let ui = initialUiState();
    ui = clickLeft(ui, 0);
    expect(ui.pendingLeft).toBe(0);
    ui = clickRight(ui, 1);
    expect(ui.pendingLeft).toBeNull();
    expect(ui.links.get(0)).toBe(1);
  });

  it("right click without a pending left does nothing", () => {
    const ui = clickRight(initialUiState(), 1);
    expect(ui.links.size).toBe(0);
  });

  it("relinking a left item replaces its right end", () => {
    let ui = initialUiState();
    ui = clickRight(clickLeft(ui, 0), 1);
    ui = clickRight(clickLeft(ui, 0), 0);
    expect(ui.links.get(0)).toBe(0);
    expect(ui.links.size).toBe(1);
  });

  it("links are removable", () => {
    let ui = clickRight(clickLeft(initialUiState(), 0), 1);
    ui = removeLink(ui, 0);
    expect(ui.links.size).toBe(0);
  });
});

describe("resetInputs", () => {
  it("clears selections between stages but keeps the code rewrite", () => {
    let ui = initialUiState();
    ui.selectedOption = 1;
    ui.codeBuffer = "my fixed code";
    ui = resetInputs(scqView, ui);
    expect(ui.selectedOption).toBeNull();
    expect(ui.codeBuffer).toBe("my fixed code");
  });

  it("seeds the code buffer from starter code exactly once", () => {
    let ui = resetInputs(cecView, initialUiState());
    expect(ui.codeBuffer).toBe("strcpy(tag, name); /* <-- fix me */");
    ui.codeBuffer = "edited";
    ui = resetInputs(cecView, ui);
    expect(ui.codeBuffer).toBe("edited");
  });
});

describe("toggleChecked", () => {
  it("adds and removes without mutating the original", () => {
    const original = new Set([1]);
    const added = toggleChecked(original, 2);
    const removed = toggleChecked(added, 1);
    expect([...original]).toEqual([1]);
    expect([...added].sort()).toEqual([1, 2]);
    expect([...removed]).toEqual([2]);
  });
});
