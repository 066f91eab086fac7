// Thin typed client over fetch. The bearer token lives in this object only;
// it is never written to storage.

import type { ChallengeSummary, Envelope, ScoreboardRow, Submission } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
    };
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/api/v1${path}`, init);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) {
      let code = "error";
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string; message?: string };
        code = payload.error ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  challenges(): Promise<ChallengeSummary[]> {
    return this.request("GET", "/challenges");
  }

  scoreboard(): Promise<ScoreboardRow[]> {
    return this.request("GET", "/scoreboard");
  }

  createSession(challengeId: string): Promise<Envelope> {
    return this.request("POST", "/sessions", { challenge_id: challengeId });
  }

  getSession(sessionId: string): Promise<Envelope> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  answer(sessionId: string, submission: Submission, seq: number): Promise<Envelope> {
    return this.request("POST", `/sessions/${sessionId}/answer`, { submission, seq });
  }

  hint(sessionId: string, seq: number): Promise<Envelope> {
    return this.request("POST", `/sessions/${sessionId}/hint`, { seq });
  }

  ack(sessionId: string, seq: number): Promise<Envelope> {
    return this.request("POST", `/sessions/${sessionId}/ack`, { seq });
  }
}
