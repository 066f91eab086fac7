// Wire types for the /api/v1 interface. The server strips every answer-key
// field before a view leaves the backend, so none of them appear here.

export type StageTag =
  | "intro"
  | "intro_quiz"
  | "challenge"
  | "explaining"
  | "conclusion_question"
  | "conclusion"
  | "finished";

export type BodyType = "scq" | "mcq" | "teq" | "csc" | "cec" | "alr";

export interface BodyView {
  type: BodyType;
  options?: string[];
  code?: string;
  units?: string[];
  prompt_mode?: string;
  starter_code?: string;
  left?: string[];
  right?: string[];
}

export interface TakenHint {
  hint_id: string;
  kind: string;
  text: string;
  cost: number;
  url?: string;
}

export interface PlayerView {
  challenge_id: string;
  title: string;
  stage: StageTag;
  attempts: number;
  score: number;
  base_points: number;
  guiding_question: string;
  taken_hints: TakenHint[];
  available_hint_count: number;
  body?: BodyView;
  intro_text?: string;
  explanation?: string;
  references?: string[];
  next_unlock?: string;
  outcome?: "solved" | "unsolved";
  flag?: string;
}

export interface Envelope {
  session_id: string;
  seq: number;
  view: PlayerView;
  verdict?: "accepted" | "rejected";
  feedback?: string[];
  detail?: Record<string, number>;
  hint?: string;
  cost?: number;
  hint_id?: string;
  url?: string;
  unlock_hint?: string;
}

export type Submission =
  | { type: "scq"; chosen_index: number }
  | { type: "mcq"; chosen_indices: number[] }
  | { type: "teq"; text: string }
  | { type: "csc"; chosen_units: number[] }
  | { type: "cec"; code: string }
  | { type: "alr"; proposed_map: Record<string, number> };

export interface ChallengeSummary {
  id: string;
  title: string;
  type: BodyType;
  base_points: number;
}

export interface ScoreboardRow {
  player_id: string;
  solved: number;
  total_score: number;
  last_solve: number;
}
