// Pure view rendering: (PlayerView, UiState) -> HTML string. No grading, no
// network; interaction is wired up elsewhere through data-action attributes.
// Keeping this pure lets tests assert on markup without a browser.

import { canAck, canRequestHint, canSubmit, screenFor, type UiState } from "./state.js";
import type { BodyView, PlayerView, TakenHint } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

const esc = escapeHtml;

function scoreLine(view: PlayerView): string {
  return `<div class="status-line">
    <span class="score">score ${view.score}/${view.base_points}</span>
    <span class="attempts">attempts ${view.attempts}</span>
  </div>`;
}

function banner(ui: UiState): string {
  if (!ui.banner) return "";
  return `<div class="banner" role="alert">${esc(ui.banner)}
    <button data-action="retry">retry</button></div>`;
}

function feedbackPanel(ui: UiState): string {
  if (ui.lastVerdict === null) return "";
  const messages = ui.lastFeedback.length
    ? `<ul class="coach">${ui.lastFeedback.map((m) => `<li>${esc(m)}</li>`).join("")}</ul>`
    : "";
  const label = ui.lastVerdict === "accepted" ? "Accepted" : "Not accepted";
  return `<div class="feedback ${ui.lastVerdict}"><strong>${label}</strong>${messages}</div>`;
}

function hintBox(view: PlayerView, ui: UiState): string {
  if (!canRequestHint(view.stage)) return "";
  const taken = view.taken_hints
    .map((hint: TakenHint) => {
      const url = hint.url
        ? ` <a href="${esc(hint.url)}" target="_blank" rel="noreferrer">${esc(hint.url)}</a>`
        : "";
      const text = hint.text ? esc(hint.text) : "";
      return `<li class="hint-taken">${text}${url} <span class="hint-cost">(-${hint.cost})</span></li>`;
    })
    .join("");
  const unlocked = view.available_hint_count > 0;
  const lockNote = unlocked
    ? `<span class="hint-state unlocked">${view.available_hint_count} hint(s) available</span>`
    : view.next_unlock
      ? `<span class="hint-state locked">locked: ${esc(view.next_unlock)}</span>`
      : view.taken_hints.length
        ? `<span class="hint-state spent">no hints remaining</span>`
        : `<span class="hint-state none">no hints for this challenge</span>`;
  return `<div class="hint-box">
    <button data-action="hint" ${unlocked && !ui.busy ? "" : "disabled"}>Request hint</button>
    ${lockNote}
    ${taken ? `<ul class="hints-taken">${taken}</ul>` : ""}
  </div>`;
}

function numberedCode(code: string): string {
  const rows = code
    .split("\n")
    .map(
      (line, i) =>
        `<tr><td class="line-no">${i + 1}</td><td class="line-text">${esc(line)}</td></tr>`,
    )
    .join("");
  return `<table class="code-view">${rows}</table>`;
}

function renderBody(body: BodyView, ui: UiState): string {
  switch (body.type) {
    case "scq": {
      const options = (body.options ?? [])
        .map(
          (option, i) => `<label class="option">
            <input type="radio" name="option" data-action="select-option" data-index="${i}"
              ${ui.selectedOption === i ? "checked" : ""}>
            ${esc(option)}</label>`,
        )
        .join("");
      return `<div class="body-scq">${options}</div>`;
    }
    case "mcq": {
      const options = (body.options ?? [])
        .map(
          (option, i) => `<label class="option">
            <input type="checkbox" data-action="toggle-option" data-index="${i}"
              ${ui.checkedOptions.has(i) ? "checked" : ""}>
            ${esc(option)}</label>`,
        )
        .join("");
      return `<div class="body-mcq">${options}</div>`;
    }
    case "teq":
      return `<div class="body-teq">
        <input type="text" id="answer-text" data-action="edit-text"
          placeholder="type your answer" value="${esc(ui.textBuffer)}">
      </div>`;
    case "csc": {
      const units = (body.units ?? [])
        .map(
          (label, i) => `<label class="unit">
            <input type="checkbox" data-action="toggle-unit" data-index="${i}"
              ${ui.selectedUnits.has(i) ? "checked" : ""}>
            <code>${esc(label)}</code></label>`,
        )
        .join("");
      return `<div class="body-csc">
        ${numberedCode(body.code ?? "")}
        <div class="units">${units}</div>
      </div>`;
    }
    case "cec":
      return `<div class="body-cec">
        <textarea id="code-editor" data-action="edit-code" rows="14" spellcheck="false">${esc(
          ui.codeBuffer ?? body.starter_code ?? "",
        )}</textarea>
      </div>`;
    case "alr": {
      const left = (body.left ?? [])
        .map((item, i) => {
          const linked = ui.links.has(i) ? "linked" : "";
          const pending = ui.pendingLeft === i ? "pending" : "";
          return `<button class="left-item ${linked} ${pending}"
            data-action="click-left" data-index="${i}">${esc(item)}</button>`;
        })
        .join("");
      const right = (body.right ?? [])
        .map(
          (item, i) => `<button class="right-item"
            data-action="click-right" data-index="${i}">${esc(item)}</button>`,
        )
        .join("");
      const links = [...ui.links.entries()]
        .sort((a, b) => a[0] - b[0])
        .map(([l, r]) => {
          const leftText = body.left?.[l] ?? `#${l}`;
          const rightText = body.right?.[r] ?? `#${r}`;
          return `<li class="link">${esc(leftText)} &rarr; ${esc(rightText)}
            <button data-action="remove-link" data-index="${l}" title="remove">&times;</button></li>`;
        })
        .join("");
      return `<div class="body-alr">
        <div class="columns">
          <div class="left-col">${left}</div>
          <div class="right-col">${right}</div>
        </div>
        ${links ? `<ul class="links">${links}</ul>` : `<p class="link-help">Click a left item, then the matching right item.</p>`}
      </div>`;
    }
    default:
      return errorScreen(`unknown challenge type "${(body as { type: string }).type}"`);
  }
}

export function errorScreen(message: string): string {
  return `<div class="error-screen" role="alert">
    <h2>Something went wrong</h2>
    <p>${esc(message)}</p>
    <button data-action="back-to-list">Back to challenges</button>
  </div>`;
}

export function renderSession(view: PlayerView, ui: UiState): string {
  const screen = screenFor(view.stage);
  const head = `<header>
    <h2>${esc(view.title)}</h2>
    ${scoreLine(view)}
  </header>${banner(ui)}`;

  if (screen === "intro") {
    return `${head}<section class="screen-intro">
      <p class="intro-text">${esc(view.intro_text ?? "")}</p>
      <button data-action="ack" ${ui.busy ? "disabled" : ""}>Continue</button>
    </section>`;
  }

  if (screen === "question") {
    const body = view.body;
    if (!body) return head + errorScreen("the server sent no challenge body");
    const bodyHtml = renderBody(body, ui);
    if (bodyHtml.includes("error-screen")) return head + bodyHtml;
    const quizNote =
      view.stage === "intro_quiz"
        ? `<p class="quiz-note">Warm-up question</p>`
        : view.stage === "conclusion_question"
          ? `<p class="quiz-note">One more question</p>`
          : "";
    return `${head}<section class="screen-question" data-stage="${view.stage}">
      ${view.intro_text ? `<p class="intro-text">${esc(view.intro_text)}</p>` : ""}
      ${quizNote}
      <h3 class="guiding-question">${esc(view.guiding_question)}</h3>
      ${bodyHtml}
      ${feedbackPanel(ui)}
      <button class="submit" data-action="submit" ${ui.busy ? "disabled" : ""}>Submit</button>
      ${hintBox(view, ui)}
    </section>`;
  }

  if (screen === "explaining") {
    return `${head}<section class="screen-explaining">
      ${feedbackPanel(ui)}
      <div class="explanation">${esc(view.explanation ?? "")}</div>
      <button data-action="ack" ${ui.busy ? "disabled" : ""}>Got it</button>
    </section>`;
  }

  if (screen === "conclusion") {
    const references = (view.references ?? [])
      .map((url) => `<li><a href="${esc(url)}" target="_blank" rel="noreferrer">${esc(url)}</a></li>`)
      .join("");
    return `${head}<section class="screen-conclusion">
      ${feedbackPanel(ui)}
      <div class="explanation">${esc(view.explanation ?? "")}</div>
      ${references ? `<ul class="references">${references}</ul>` : ""}
      <button data-action="ack" ${ui.busy ? "disabled" : ""}>Finish</button>
    </section>`;
  }

  if (screen === "finished") {
    if (view.outcome === "solved") {
      const references = (view.references ?? [])
        .map((url) => `<li><a href="${esc(url)}" target="_blank" rel="noreferrer">${esc(url)}</a></li>`)
        .join("");
      return `${head}<section class="screen-finished solved">
        <h3>Solved!</h3>
        <p class="flag"><code>${esc(view.flag ?? "")}</code></p>
        <div class="explanation">${esc(view.explanation ?? "")}</div>
        ${references ? `<ul class="references">${references}</ul>` : ""}
        <p class="final-score">Final score: ${view.score}</p>
        <button data-action="back-to-list">Back to challenges</button>
      </section>`;
    }
    return `${head}<section class="screen-finished unsolved">
      <h3>Not solved this time</h3>
      ${feedbackPanel(ui)}
      <p class="final-score">Score: ${view.score}</p>
      <button data-action="back-to-list">Back to challenges</button>
    </section>`;
  }

  return head + errorScreen(`unknown stage "${view.stage}"`);
}

// sanity guard used by main.ts before acting; mirrors the screens above
export function legalActions(view: PlayerView): string[] {
  const actions: string[] = [];
  if (canSubmit(view.stage)) actions.push("submit");
  if (canAck(view.stage)) actions.push("ack");
  if (canRequestHint(view.stage)) actions.push("hint");
  return actions;
}

export function renderLogin(error?: string): string {
  return `<section class="screen-login">
    <h2>Sign in</h2>
    ${error ? `<div class="banner" role="alert">${esc(error)}</div>` : ""}
    <label>Access token
      <input type="password" id="token-input" placeholder="bearer token" autocomplete="off">
    </label>
    <button data-action="login">Enter</button>
    <p class="login-note">The token stays in memory only.</p>
  </section>`;
}

export function renderChallengeList(
  challenges: { id: string; title: string; type: string; base_points: number }[],
  scoreboard: { player_id: string; solved: number; total_score: number }[],
): string {
  const rows = challenges
    .map(
      (c) => `<tr>
        <td><button data-action="open-challenge" data-id="${esc(c.id)}">${esc(c.title)}</button></td>
        <td class="type-tag">${esc(c.type)}</td>
        <td class="points">${c.base_points}</td>
      </tr>`,
    )
    .join("");
  const board = scoreboard
    .map(
      (row, i) => `<tr>
        <td>${i + 1}</td><td>${esc(row.player_id)}</td>
        <td>${row.solved}</td><td>${row.total_score}</td>
      </tr>`,
    )
    .join("");
  return `<section class="screen-list">
    <h2>Challenges</h2>
    <table class="challenge-table">
      <thead><tr><th>challenge</th><th>type</th><th>points</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <h2>Scoreboard</h2>
    <table class="scoreboard">
      <thead><tr><th>#</th><th>player</th><th>solved</th><th>score</th></tr></thead>
      <tbody>${board.length ? board : `<tr><td colspan="4">no solves yet</td></tr>`}</tbody>
    </table>
  </section>`;
}
