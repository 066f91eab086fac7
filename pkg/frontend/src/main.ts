// Browser bootstrap: login, challenge list, and the session loop. All state
// transitions come from server responses; this file only forwards actions
// and re-renders whatever view comes back.

import { ApiClient, ApiError, NetworkError } from "./api.js";
import {
  errorScreen,
  renderChallengeList,
  renderLogin,
  renderSession,
} from "./render.js";
import {
  buildSubmission,
  clickLeft,
  clickRight,
  initialUiState,
  removeLink,
  resetInputs,
  toggleChecked,
  type UiState,
} from "./state.js";
import type { Envelope, PlayerView } from "./types.js";

interface AppState {
  api: ApiClient | null;
  sessionId: string | null;
  seq: number;
  view: PlayerView | null;
  ui: UiState;
}

const app: AppState = {
  api: null,
  sessionId: null,
  seq: 0,
  view: null,
  ui: initialUiState(),
};

const root = document.getElementById("app") as HTMLElement;

function draw(html: string): void {
  root.innerHTML = html;
}

function redraw(): void {
  if (!app.api) {
    draw(renderLogin());
    return;
  }
  if (app.view && app.sessionId) {
    draw(renderSession(app.view, app.ui));
    return;
  }
  void showList();
}

async function showList(): Promise<void> {
  if (!app.api) return;
  try {
    const [challenges, scoreboard] = await Promise.all([
      app.api.challenges(),
      app.api.scoreboard(),
    ]);
    app.sessionId = null;
    app.view = null;
    draw(renderChallengeList(challenges, scoreboard));
  } catch (error) {
    if (error instanceof ApiError && error.status === 401) {
      app.api = null;
      draw(renderLogin("that token was not accepted"));
      return;
    }
    draw(errorScreen(error instanceof Error ? error.message : String(error)));
  }
}

function adoptEnvelope(envelope: Envelope, verdictBearing: boolean): void {
  app.sessionId = envelope.session_id;
  app.seq = envelope.seq;
  const stageChanged = app.view?.stage !== envelope.view.stage;
  app.view = envelope.view;
  if (verdictBearing) {
    app.ui.lastVerdict = envelope.verdict ?? null;
    app.ui.lastFeedback = envelope.feedback ?? [];
  }
  if (stageChanged) {
    app.ui = resetInputs(envelope.view, app.ui);
  }
  app.ui.banner = null;
}

async function refetch(): Promise<void> {
  if (!app.api || !app.sessionId) return;
  const envelope = await app.api.getSession(app.sessionId);
  adoptEnvelope(envelope, false);
}

/** One in-flight mutation per session; 409 means someone else moved the
 * session first, so the only correct reaction is a refetch and re-render. */
async function mutate(run: () => Promise<Envelope>, verdictBearing = false): Promise<void> {
  if (!app.api || app.ui.busy) return;
  app.ui.busy = true;
  redraw();
  try {
    const envelope = await run();
    adoptEnvelope(envelope, verdictBearing);
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      await refetch();
    } else if (error instanceof NetworkError) {
      app.ui.banner = "network problem; nothing was changed";
    } else if (error instanceof ApiError) {
      app.ui.banner = `${error.code}: ${error.message}`;
    } else {
      app.ui.banner = String(error);
    }
  } finally {
    app.ui.busy = false;
    redraw();
  }
}

async function handleAction(action: string, target: HTMLElement): Promise<void> {
  const api = app.api;
  switch (action) {
    case "login": {
      const input = document.getElementById("token-input") as HTMLInputElement | null;
      const token = input?.value.trim() ?? "";
      if (!token) return;
      app.api = new ApiClient("", token);
      await showList();
      return;
    }
    case "open-challenge": {
      if (!api) return;
      const id = target.dataset.id ?? "";
      await mutate(() => api.createSession(id));
      return;
    }
    case "back-to-list":
      await showList();
      return;
    case "retry":
      app.ui.banner = null;
      if (app.sessionId) await refetch();
      redraw();
      return;
    case "ack":
      if (!api || !app.sessionId) return;
      await mutate(() => api.ack(app.sessionId as string, app.seq));
      return;
    case "hint":
      if (!api || !app.sessionId) return;
      await mutate(() => api.hint(app.sessionId as string, app.seq));
      return;
    case "submit": {
      if (!api || !app.sessionId || !app.view) return;
      const submission = buildSubmission(app.view, app.ui);
      if ("missing" in submission) {
        app.ui.banner = submission.missing;
        redraw();
        return;
      }
      await mutate(() => api.answer(app.sessionId as string, submission, app.seq), true);
      return;
    }
    case "select-option":
      app.ui.selectedOption = Number(target.dataset.index);
      return;
    case "toggle-option":
      app.ui.checkedOptions = toggleChecked(app.ui.checkedOptions, Number(target.dataset.index));
      return;
    case "toggle-unit":
      app.ui.selectedUnits = toggleChecked(app.ui.selectedUnits, Number(target.dataset.index));
      return;
    case "click-left":
      app.ui = clickLeft(app.ui, Number(target.dataset.index));
      redraw();
      return;
    case "click-right":
      app.ui = clickRight(app.ui, Number(target.dataset.index));
      redraw();
      return;
    case "remove-link":
      app.ui = removeLink(app.ui, Number(target.dataset.index));
      redraw();
      return;
    default:
      return;
  }
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!target) return;
  const action = target.dataset.action ?? "";
  if (action === "edit-text" || action === "edit-code") return; // input events handle these
  void handleAction(action, target);
});

root.addEventListener("input", (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  if (action === "edit-text") {
    app.ui.textBuffer = (target as HTMLInputElement).value;
  } else if (action === "edit-code") {
    app.ui.codeBuffer = (target as HTMLTextAreaElement).value;
  }
});

root.addEventListener("keydown", (event) => {
  if (event.key === "Enter" && (event.target as HTMLElement).id === "token-input") {
    void handleAction("login", event.target as HTMLElement);
  }
});

redraw();
