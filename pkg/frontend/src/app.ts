// Session state machine shared by the browser shell and the tests.
// One active session at a time; every action round-trips through the
// service and replaces the whole state (no optimistic updates).

import { ArenaClient, CorpusEntry, SessionState } from "./api.js";
import { buildPositionView, PositionView } from "./view.js";

export interface AppState {
  session: SessionState | null;
  view: PositionView | null;
  error: string | null;
  lastReplies: string[];
}

export class ArenaApp {
  readonly client: ArenaClient;
  state: AppState = { session: null, view: null, error: null, lastReplies: [] };

  constructor(baseUrl: string) {
    this.client = new ArenaClient(baseUrl);
  }

  corpus(): Promise<CorpusEntry[]> {
    return this.client.listCorpus();
  }

  private accept(session: SessionState): AppState {
    this.state = {
      session,
      view: buildPositionView(session),
      error: null,
      lastReplies: (session.machine_replies ?? []).map(
        (r) => `${r.address} ${r.payload}`,
      ),
    };
    return this.state;
  }

  async startSession(req: {
    formula_id?: string;
    formula_text?: string;
    strategy_id?: string;
  }): Promise<AppState> {
    try {
      return this.accept(await this.client.createSession(req));
    } catch (e) {
      this.state = {
        session: null,
        view: null,
        error: (e as Error).message,
        lastReplies: [],
      };
      return this.state;
    }
  }

  async submitMove(address: string, payload: number | string): Promise<AppState> {
    const session = this.state.session;
    if (!session) {
      this.state = { ...this.state, error: "no active session" };
      return this.state;
    }
    const result = await this.client.postMove(session.session_id, address, payload);
    if (result.ok) return this.accept(result.state);
    // rejected: keep the position view untouched, surface the reason
    this.state = { ...this.state, error: result.reason };
    return this.state;
  }

  async refresh(): Promise<AppState> {
    const session = this.state.session;
    if (!session) return this.state;
    return this.accept(await this.client.getSession(session.session_id));
  }
}
