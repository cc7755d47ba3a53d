// Typed client for the game session service.  Every state change
// round-trips through the service; nothing is computed locally.

export interface LegalMove {
  address: string;
  kind: "numeral" | "binary";
  options?: string[];
}

export interface MachineReply {
  address: string;
  payload: number | string;
}

export interface Complexity {
  time: number;
  space: number;
  amplitude: [number, number][];
  compositions: number;
}

export interface TreeNode {
  kind:
    | "atom"
    | "par_and"
    | "par_or"
    | "blind_all"
    | "blind_exists"
    | "choice_and"
    | "choice_or"
    | "choice_all"
    | "choice_exists";
  text?: string;
  var?: string;
  owner?: "T" | "B";
  address?: string;
  children?: TreeNode[];
  collapsed?: string[];
}

export interface SessionState {
  session_id: string;
  formula: string;
  strategy: string;
  position: string;
  position_tree: TreeNode;
  legal_env_moves: LegalMove[];
  status: "ongoing" | "finished";
  verdict: string | null;
  transcript: string[];
  complexity: Complexity;
  notes: string[];
  machine_replies?: MachineReply[];
}

export interface CorpusEntry {
  id: string;
  formula: string;
  description: string;
  has_strategy: boolean;
}

export type MoveResult =
  | { ok: true; state: SessionState }
  | { ok: false; reason: string };

async function errorDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: string };
    return body.detail ?? `${res.status} ${res.statusText}`;
  } catch {
    return `${res.status} ${res.statusText}`;
  }
}

export class ArenaClient {
  constructor(private readonly base: string) {}

  async listCorpus(): Promise<CorpusEntry[]> {
    const res = await fetch(`${this.base}/corpus`);
    if (!res.ok) throw new Error(await errorDetail(res));
    const body = (await res.json()) as { entries: CorpusEntry[] };
    return body.entries;
  }

  async createSession(req: {
    formula_id?: string;
    formula_text?: string;
    strategy_id?: string;
  }): Promise<SessionState> {
    const res = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
    if (!res.ok) throw new Error(await errorDetail(res));
    return (await res.json()) as SessionState;
  }

  async getSession(id: string): Promise<SessionState> {
    const res = await fetch(`${this.base}/sessions/${id}`);
    if (!res.ok) throw new Error(await errorDetail(res));
    return (await res.json()) as SessionState;
  }

  // An illegal move is an expected outcome (the service names the
  // violated condition), not an exception.
  async postMove(
    id: string,
    address: string,
    payload: number | string,
  ): Promise<MoveResult> {
    const res = await fetch(`${this.base}/sessions/${id}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ address, payload }),
    });
    if (res.ok) return { ok: true, state: (await res.json()) as SessionState };
    return { ok: false, reason: await errorDetail(res) };
  }
}
