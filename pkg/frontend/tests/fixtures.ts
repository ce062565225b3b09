import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  BoundsDoc,
  DryRunDoc,
  PlanDoc,
  ProjectDoc,
  SessionDoc,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  const raw = readFileSync(join(here, "fixtures", `${name}.json`), "utf-8");
  return JSON.parse(raw) as T;
}

export const sessionCase2 = () => fixture<SessionDoc>("session_case2");
export const sessionCase1 = () => fixture<SessionDoc>("session_case1");
export const sessionCase2Running = () => fixture<SessionDoc>("session_case2_running");
export const sessionCompleted = () => fixture<SessionDoc>("session_completed");
export const sessionAfterAccept = () => fixture<SessionDoc>("session_case2_after_accept");
export const dryRunAccept = () => fixture<DryRunDoc>("dryrun_case2_accept");
export const dryRunDefer = () => fixture<DryRunDoc>("dryrun_case2_defer");
export const dryRunRunningDefer = () => fixture<DryRunDoc>("dryrun_case2_running_defer");
export const projectChain = () => fixture<ProjectDoc>("project_chain");
export const projectRateSkew = () => fixture<ProjectDoc>("project_rate_skew");
export const planCompleted = () => fixture<PlanDoc>("plan_completed");
export const planCase2 = () => fixture<PlanDoc>("plan_case2");
export const boundsChain = () => fixture<BoundsDoc>("bounds_chain");
