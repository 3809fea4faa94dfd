// Navigation: wheel zooms, left-drag pans, right-drag rotates.  The
// mapping is applied to an OrbitControls-shaped object so headless tests
// can verify the contract without a DOM.

import * as THREE from 'three'
import type { CameraHint } from './types.js'

export interface OrbitLike {
  mouseButtons: { LEFT?: number | null; MIDDLE?: number | null; RIGHT?: number | null }
  enableZoom: boolean
  enablePan: boolean
  enableRotate: boolean
  enableDamping: boolean
  target: THREE.Vector3
  update(): void
}

export function applyMouseContract<C extends OrbitLike>(controls: C): C {
  controls.mouseButtons = {
    LEFT: THREE.MOUSE.PAN,
    MIDDLE: THREE.MOUSE.DOLLY,
    RIGHT: THREE.MOUSE.ROTATE,
  }
  controls.enableZoom = true
  controls.enablePan = true
  controls.enableRotate = true
  controls.enableDamping = true
  return controls
}

/** Point the camera per the payload's hint; the model stays framed. */
export function applyCameraHint(
  camera: THREE.PerspectiveCamera,
  controls: OrbitLike,
  hint: CameraHint,
): void {
  camera.position.set(hint.eye[0], hint.eye[1], hint.eye[2])
  controls.target.set(hint.target[0], hint.target[1], hint.target[2])
  camera.lookAt(controls.target)
  controls.update()
}
